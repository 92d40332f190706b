"""Weighted simple games on n voters.

Losing coalitions play the role of feasible patterns with quota ``q = L + 1``.
Counting reuses the class enumeration engine started from ``{0}`` losing and
``{1}`` winning, with nonnegative sorted weights and no cap on single voters.
Games are counted with voters ordered by desirability, i.e. one game per
isomorphism class of complete games.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .core import Pattern, as_mask, check_n, full_mask
from .dominance import build_table
from .enumeration import GAME, run
from .errors import NotMonotone
from .lp import solve_int_rows


def count_weighted_games(n: int, **options) -> int:
    return run(n, None, mode=GAME, **options)


def _winning_set(winning: Iterable[Pattern | int], n: int) -> frozenset[int]:
    win = frozenset(as_mask(a, n) for a in winning)
    full = full_mask(n)
    if 0 in win or full not in win:
        raise NotMonotone("the empty coalition must lose and the grand coalition must win")
    for a in win:
        for i in range(n):
            if (a | (1 << i)) not in win:
                raise NotMonotone(f"coalition {a} wins but its superset {a | (1 << i)} loses")
    return win


def weighted_witness(winning: Iterable[Pattern | int], n: int) -> tuple[tuple[int, ...], int] | None:
    """Integer weights and quota separating winning from losing, if any exist."""
    check_n(n)
    win = _winning_set(winning, n)
    # variables w_1..w_n, q; strict separation scaled to a margin of one
    rows, rhs = [], []
    for a in range(1 << n):
        coeffs = [(a >> i) & 1 for i in range(n)]
        if a in win:
            rows.append([-c for c in coeffs] + [1])
            rhs.append(0)
        else:
            rows.append(coeffs + [-1])
            rhs.append(-1)
    sol = solve_int_rows(rows, rhs, n + 1)
    if not sol.ok:
        return None
    vals = [Fraction(v) for v in sol.values]
    scale = math.lcm(*(v.denominator for v in vals))
    ints = [int(v * scale) for v in vals]
    g = math.gcd(*ints) or 1
    ints = [x // g for x in ints]
    return tuple(ints[:n]), ints[n]


def is_weighted(winning: Iterable[Pattern | int], n: int) -> bool:
    return weighted_witness(winning, n) is not None


@lru_cache(maxsize=None)
def monotone_functions(n: int) -> tuple[int, ...]:
    """All monotone Boolean functions on n variables as truth-table bitsets.

    Bit ``a`` of a table is ``f(a)``.  Built from pairs ``f0 <= f1`` on
    ``n - 1`` variables, the top variable selecting the upper half.
    """
    if n == 0:
        return (0, 1)
    half = 1 << (n - 1)
    smaller = monotone_functions(n - 1)
    return tuple(
        f0 | (f1 << half) for f0 in smaller for f1 in smaller if f0 & ~f1 == 0
    )


def _complete(win: int, n: int) -> bool:
    t = build_table(n)
    return all(t.up[a] & ~win == 0 for a in range(1 << n) if (win >> a) & 1)


def oracle_count(n: int) -> int:
    """Count by brute force: monotone functions, ordered voters, LP separability."""
    check_n(n, 5)
    full = full_mask(n)
    count = 0
    for f in monotone_functions(n):
        if f & 1 or not (f >> full) & 1:
            continue
        if not _complete(f, n):
            continue
        win = [a for a in range(1 << n) if (f >> a) & 1]
        if is_weighted(win, n):
            count += 1
    return count
