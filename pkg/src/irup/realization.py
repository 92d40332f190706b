"""Pattern sets versus concrete instances.

A set ``P`` of 0/1 patterns is the proper pattern set of some instance iff
the system

    1 <= l_1 <= ... <= l_n <= L
    l.a <= L       for a in P
    l.a >= L + 1   for a not in P

has a solution.  Internally the lengths are written as prefix sums of
nonnegative increments ``k`` (``l_j = k_1 + ... + k_j``), which removes the
ordering rows; then ``l.a`` equals the sum of ``k_j`` times the suffix sums
of ``a``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .core import Instance, Pattern, PatternClass, as_mask, check_n, full_mask, iter_bits
from .dominance import build_table, is_downward_closed, maximal_elements, minimal_elements
from .errors import ConsistencyViolation, NotDownwardClosed, OverlappingSets, Unrealizable
from .lp import LinearSystem, LpSolution, solve_int_rows


@lru_cache(maxsize=None)
def suffix_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """``suffix_rows(n)[a][j]`` is the number of items ``>= j`` in ``a`` (0-based j)."""
    rows = []
    for a in range(1 << n):
        s, row = 0, [0] * n
        for j in range(n - 1, -1, -1):
            s += (a >> j) & 1
            row[j] = s
        rows.append(tuple(row))
    return tuple(rows)


def increment_rows(p_le: Iterable[int], p_gt: Iterable[int], n: int):
    """``<=``-rows over ``(k_1..k_n, L)`` for the partial realizability system."""
    suf = suffix_rows(n)
    rows = [[-1] + [0] * n, [1] * n + [-1]]
    rhs = [-1, 0]
    for a in p_le:
        rows.append([*suf[a], -1])
        rhs.append(0)
    for a in p_gt:
        rows.append([-s for s in suf[a]] + [1])
        rhs.append(-1)
    return rows, rhs


def solve_partial(
    p_le: Iterable[int], p_gt: Iterable[int], n: int, minimize_L: bool = False
) -> tuple[tuple[Fraction, ...], Fraction] | None:
    """Rational witness ``(l, L)`` of the partial system, or None if infeasible."""
    rows, rhs = increment_rows(p_le, p_gt, n)
    sol = solve_int_rows(rows, rhs, n + 1, [0] * n + [1] if minimize_L else None)
    if not sol.ok:
        return None
    k = sol.values
    lengths, acc = [], Fraction(0)
    for j in range(n):
        acc += k[j]
        lengths.append(acc)
    return tuple(lengths), k[n]


def separation_system(p_le: Iterable[Pattern | int], p_gt: Iterable[Pattern | int], n: int) -> LinearSystem:
    """The partial realizability system over ``(l_1..l_n, L)``, for inspection."""
    sys = LinearSystem([f"l{i + 1}" for i in range(n)] + ["L"])
    sys.add([1] + [0] * n, ">=", 1)
    for i in range(n - 1):
        row = [0] * (n + 1)
        row[i], row[i + 1] = 1, -1
        sys.add(row, "<=", 0)
    sys.add([0] * (n - 1) + [1, -1], "<=", 0)
    for p in p_le:
        a = as_mask(p, n)
        sys.add([(a >> i) & 1 for i in range(n)] + [-1], "<=", 0)
    for p in p_gt:
        a = as_mask(p, n)
        sys.add([(a >> i) & 1 for i in range(n)] + [-1], ">=", 1)
    return sys


def realizability_system(patterns: Iterable[Pattern | int], n: int) -> LinearSystem:
    inside = {as_mask(p, n) for p in patterns}
    return separation_system(sorted(inside), [a for a in range(1 << n) if a not in inside], n)


def partially_realizable(p_le: Iterable[Pattern | int], p_gt: Iterable[Pattern | int], n: int) -> bool:
    le = {as_mask(p, n) for p in p_le}
    gt = {as_mask(p, n) for p in p_gt}
    if le & gt:
        raise OverlappingSets(f"patterns {sorted(le & gt)} are in both sets")
    return solve_partial(le, gt, n) is not None


def witness_fits(witness, a: int, feasible: bool) -> bool:
    """Does the rational witness classify pattern ``a`` the requested way?"""
    lengths, L = witness
    load = sum((lengths[i] for i in iter_bits(a)), Fraction(0))
    return load <= L if feasible else load >= L + 1


def integer_instance(lengths: Iterable[Fraction], L: Fraction) -> Instance:
    lengths = [Fraction(x) for x in lengths]
    L = Fraction(L)
    scale = math.lcm(L.denominator, *(x.denominator for x in lengths))
    g = math.gcd(int(L * scale), *(int(x * scale) for x in lengths))
    return Instance(int(L * scale) // g, tuple(int(x * scale) // g for x in lengths))


def proper_masks(e: Instance) -> list[bool]:
    """Feasibility indicator over all ``2**n`` masks via subset sums."""
    n = e.n
    load = [0] * (1 << n)
    for a in range(1, 1 << n):
        low = a & -a
        load[a] = load[a ^ low] + e.lengths[low.bit_length() - 1]
    return [x <= e.L for x in load]


def pattern_class(n: int, patterns: Iterable[Pattern | int]) -> PatternClass:
    check_n(n)
    pats = frozenset(as_mask(p, n) for p in patterns)
    t = build_table(n)
    return PatternClass(n, pats, maximal_elements(pats, t))


def class_from_maximal(n: int, maximal: Iterable[Pattern | int]) -> PatternClass:
    t = build_table(n)
    ms = [as_mask(p, n) for p in maximal]
    bits = t.down_of(ms)
    return PatternClass(n, frozenset(iter_bits(bits)), maximal_elements(ms, t))


def proper_patterns(e: Instance) -> PatternClass:
    feas = proper_masks(e)
    return pattern_class(e.n, (a for a, ok in enumerate(feas) if ok))


def realize(c: PatternClass) -> Instance:
    """Integer instance whose proper pattern set is exactly ``c.patterns``."""
    n = c.n
    t = build_table(n)
    if not is_downward_closed(c.patterns, t):
        raise NotDownwardClosed("pattern set is not closed under dominance")
    outside = [a for a in range(1 << n) if a not in c.patterns]
    witness = solve_partial(
        maximal_elements(c.patterns, t), minimal_elements(outside, t), n, minimize_L=True
    )
    if witness is None:
        raise Unrealizable("no lengths separate this pattern set from its complement")
    e = integer_instance(*witness)
    if proper_patterns(e).patterns != c.patterns:
        raise ConsistencyViolation(f"realized instance {e} does not reproduce the class")
    return e


def all_patterns(n: int) -> frozenset[int]:
    return frozenset(range(full_mask(n) + 1))
