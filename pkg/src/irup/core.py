"""Domain types: patterns, instances, pattern classes and gap reports.

Patterns over ``n`` unit-demand items are bitmasks; bit ``i - 1`` stands for
item ``i`` and items are ordered by nondecreasing length, so the mask value
of a pattern is its ``num`` rank.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, LengthExceedsCapacity, NonPositive, NTooLarge

Rational = Fraction

MAX_N = 16


def check_n(n: int, limit: int = MAX_N) -> None:
    if not isinstance(n, int) or n < 1:
        raise NTooLarge(f"item count must be a positive integer, got {n!r}")
    if n > limit:
        raise NTooLarge(f"n={n} exceeds the supported maximum {limit}")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_to_vector(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def vector_to_mask(vector: Sequence[int]) -> int:
    mask = 0
    for i, v in enumerate(vector):
        if v not in (0, 1):
            raise ValueError(f"pattern entries must be 0 or 1, got {v!r}")
        if v:
            mask |= 1 << i
    return mask


def format_rational(q: Fraction) -> str:
    """Always ``p/q``, also for integers, so output never looks like a float."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"expected an exact rational like 7/8, got {text!r}")
    return Fraction(text)


@dataclass(frozen=True, order=True)
class Pattern:
    """A 0/1 cutting pattern over ``n`` items, stored as a bitmask."""

    n: int
    bits: int

    def __post_init__(self):
        check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit into n={self.n}")

    @classmethod
    def from_vector(cls, vector: Sequence[int]) -> Pattern:
        return cls(len(vector), vector_to_mask(vector))

    def to_vector(self) -> tuple[int, ...]:
        return mask_to_vector(self.bits, self.n)

    @property
    def num(self) -> int:
        return self.bits

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> Pattern:
        return Pattern(self.n, full_mask(self.n) ^ self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.to_vector()))


def as_mask(p: Pattern | int, n: int) -> int:
    """Accept either a Pattern or a raw mask for an ``n``-item universe."""
    if isinstance(p, Pattern):
        if p.n != n:
            raise DimensionMismatch(f"pattern has n={p.n}, expected n={n}")
        return p.bits
    if p < 0 or p >> n:
        raise DimensionMismatch(f"mask {p} does not fit into n={n}")
    return p


@dataclass(frozen=True)
class Instance:
    """Unit-demand instance ``(n, L, l)`` with sorted lengths."""

    L: int
    lengths: tuple[int, ...]

    def __post_init__(self):
        if not self.lengths:
            raise NonPositive("an instance needs at least one item")
        if self.L < 1 or any(x < 1 for x in self.lengths):
            raise NonPositive("capacity and lengths must be positive integers")
        if any(x > self.L for x in self.lengths):
            raise LengthExceedsCapacity(
                f"some length exceeds the capacity L={self.L}: {list(self.lengths)}"
            )
        object.__setattr__(self, "lengths", tuple(sorted(self.lengths)))

    @property
    def n(self) -> int:
        return len(self.lengths)

    def load(self, mask: int) -> int:
        return sum(self.lengths[i] for i in iter_bits(mask))

    def to_m_form(self) -> InstanceM:
        counts = Counter(self.lengths)
        ls = sorted(counts)
        return InstanceM(self.L, tuple(ls), tuple(counts[x] for x in ls))

    def __str__(self) -> str:
        return f"L={self.L}, l=({', '.join(map(str, self.lengths))})"


def make_instance(L: int, lengths: Iterable[int]) -> Instance:
    return Instance(int(L), tuple(int(x) for x in lengths))


@dataclass(frozen=True)
class InstanceM:
    """Instance with multiplicities: ``m`` distinct lengths with demands ``b``."""

    L: int
    lengths: tuple[int, ...]
    demands: tuple[int, ...]

    def __post_init__(self):
        if len(self.lengths) != len(self.demands) or not self.lengths:
            raise DimensionMismatch("lengths and demands must be nonempty and equally long")
        if self.L < 1 or any(x < 1 for x in self.lengths):
            raise NonPositive("capacity and lengths must be positive integers")
        if any(b < 1 for b in self.demands):
            raise NonPositive("demands must be positive integers")
        if any(x > self.L for x in self.lengths):
            raise LengthExceedsCapacity(f"some length exceeds the capacity L={self.L}")
        pairs = sorted(zip(self.lengths, self.demands))
        object.__setattr__(self, "lengths", tuple(p[0] for p in pairs))
        object.__setattr__(self, "demands", tuple(p[1] for p in pairs))

    @property
    def m(self) -> int:
        return len(self.lengths)

    @property
    def n(self) -> int:
        return sum(self.demands)


def expand_to_unit_demand(e: InstanceM) -> Instance:
    lengths = [x for x, b in zip(e.lengths, e.demands) for _ in range(b)]
    return Instance(e.L, tuple(lengths))


@dataclass(frozen=True)
class PatternClass:
    """One pattern-equivalence class: a down-set of patterns and its maximal antichain."""

    n: int
    patterns: frozenset[int]
    maximal: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.patterns)

    def contains(self, p: Pattern | int) -> bool:
        return as_mask(p, self.n) in self.patterns

    def indicator(self) -> list[bool]:
        return [a in self.patterns for a in range(1 << self.n)]

    def to_line(self) -> str:
        ms = sorted(self.maximal, reverse=True)
        return " ".join(map(str, [self.n, len(ms), *ms]))


@dataclass(frozen=True)
class BoundFlags:
    zd_is_1: bool
    zd_le_2: bool
    zcp_lb: Fraction
    chan_ok: bool


@dataclass(frozen=True)
class GapReport:
    z_d: int
    z_c_proper: Fraction
    z_c_feasible: Fraction | None = None
    bound_flags: BoundFlags | None = field(default=None, compare=False)

    @property
    def delta_proper(self) -> Fraction:
        return self.z_d - self.z_c_proper

    @property
    def delta(self) -> Fraction | None:
        if self.z_c_feasible is None:
            return None
        return self.z_d - self.z_c_feasible

    @property
    def proper_irup(self) -> bool:
        return self.delta_proper < 1
