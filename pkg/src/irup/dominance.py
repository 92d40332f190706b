"""The suffix-sum dominance order on 0/1 patterns.

``a`` is dominated by ``b`` when every suffix sum of ``a`` is at most the
matching suffix sum of ``b``.  With sorted lengths this implies that ``a``
is no longer than ``b``, so feasible pattern sets are down-sets of this order.

Relation rows are stored as Python ints used as bitsets over all ``2**n``
patterns: ``down[b]`` has bit ``a`` set iff ``a`` is dominated by ``b`` and
``up[a]`` has bit ``b`` set iff the same holds.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .core import MAX_N, Pattern, as_mask, check_n, iter_bits
from .errors import DimensionMismatch


def dominates(a: Pattern, b: Pattern) -> bool:
    """True iff ``a`` is dominated by ``b`` (read: a precedes b)."""
    if a.n != b.n:
        raise DimensionMismatch(f"patterns have different lengths {a.n} and {b.n}")
    return mask_dominated(a.bits, b.bits, a.n)


def mask_dominated(a: int, b: int, n: int) -> bool:
    if a > b:
        # num is monotone along the order
        return False
    sa = sb = 0
    for j in range(n - 1, -1, -1):
        sa += (a >> j) & 1
        sb += (b >> j) & 1
        if sa > sb:
            return False
    return True


def num(a: Pattern) -> int:
    return a.bits


def _lower_covers(a: int, n: int) -> Iterable[int]:
    for i in range(n):
        if (a >> i) & 1:
            yield a ^ (1 << i)
            if i and not (a >> (i - 1)) & 1:
                yield a ^ (1 << i) ^ (1 << (i - 1))


def _upper_covers(a: int, n: int) -> Iterable[int]:
    for i in range(n):
        if not (a >> i) & 1:
            yield a | (1 << i)
            if i and (a >> (i - 1)) & 1:
                yield a ^ (1 << i) ^ (1 << (i - 1))


class DominanceTable:
    """Full relation on ``B^n`` stored as bitset rows in both directions."""

    def __init__(self, n: int):
        check_n(n, MAX_N)
        self.n = n
        size = 1 << n
        down = [0] * size
        # every cover move lowers num, so increasing num order is topological
        for a in range(size):
            row = 1 << a
            for c in _lower_covers(a, n):
                row |= down[c]
            down[a] = row
        up = [0] * size
        for a in range(size - 1, -1, -1):
            row = 1 << a
            for c in _upper_covers(a, n):
                row |= up[c]
            up[a] = row
        self.down = down
        self.up = up

    @property
    def size(self) -> int:
        return 1 << self.n

    def holds(self, a: Pattern | int, b: Pattern | int) -> bool:
        """``a`` is dominated by ``b``."""
        a = as_mask(a, self.n)
        b = as_mask(b, self.n)
        return bool((self.down[b] >> a) & 1)

    def rel(self) -> list[list[bool]]:
        """Dense boolean matrix ``rel[a][b]``; only sensible for small n."""
        return [[self.holds(a, b) for b in range(self.size)] for a in range(self.size)]

    def down_of(self, masks: Iterable[int]) -> int:
        out = 0
        for b in masks:
            out |= self.down[b]
        return out

    def up_of(self, masks: Iterable[int]) -> int:
        out = 0
        for a in masks:
            out |= self.up[a]
        return out


@lru_cache(maxsize=None)
def build_table(n: int) -> DominanceTable:
    return DominanceTable(n)


def _masks(s: Iterable[Pattern | int], n: int) -> list[int]:
    return [as_mask(p, n) for p in s]


def downward_closure(s: Iterable[Pattern | int], t: DominanceTable) -> frozenset[int]:
    """All patterns dominated by some member of ``s``, as masks."""
    bits = t.down_of(_masks(s, t.n))
    return frozenset(iter_bits(bits))


def maximal_elements(s: Iterable[Pattern | int], t: DominanceTable) -> tuple[int, ...]:
    """The members of ``s`` not dominated by another member, sorted by num."""
    ms = _masks(s, t.n)
    sbits = 0
    for a in ms:
        sbits |= 1 << a
    return tuple(a for a in sorted(set(ms)) if t.up[a] & sbits == 1 << a)


def minimal_elements(s: Iterable[Pattern | int], t: DominanceTable) -> tuple[int, ...]:
    ms = _masks(s, t.n)
    sbits = 0
    for a in ms:
        sbits |= 1 << a
    return tuple(a for a in sorted(set(ms)) if t.down[a] & sbits == 1 << a)


def is_downward_closed(s: Iterable[Pattern | int], t: DominanceTable) -> bool:
    ms = set(_masks(s, t.n))
    sbits = 0
    for a in ms:
        sbits |= 1 << a
    return all(t.down[b] & ~sbits == 0 for b in maximal_elements(ms, t))
