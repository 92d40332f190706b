"""Exact optima, gaps and bound checks for single instances.

``z_d`` is computed by a branch-and-bound over proper pattern columns; the
subset dynamic program in ``z_d_dp`` is an unrelated exact method kept as
its oracle.  All relaxation values are exact ``Fraction`` objects.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .core import (
    BoundFlags,
    GapReport,
    Instance,
    InstanceM,
    format_rational,
    full_mask,
    iter_bits,
)
from .errors import ConsistencyViolation, DimensionMismatch, PatternExplosion
from .lp import min_sum_columns, minimize_unit_sum
from .realization import proper_masks

DEFAULT_PATTERN_CAP = 10**6


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


# -- integer optimum ----------------------------------------------------------


def first_fit_decreasing(e: Instance) -> int:
    bins: list[int] = []
    for x in reversed(e.lengths):
        for i, load in enumerate(bins):
            if load + x <= e.L:
                bins[i] = load + x
                break
        else:
            bins.append(x)
    return len(bins)


class _Packer:
    """Can the items of a mask be packed into ``k`` bins?  Depth-first with memo."""

    def __init__(self, e: Instance):
        self.e = e
        self.L = e.L
        self.lengths = e.lengths
        self.failed: dict[int, int] = {}

    def load(self, mask: int) -> int:
        return sum(self.lengths[i] for i in iter_bits(mask))

    def columns(self, rest: int, cap: int) -> Iterable[int]:
        """Subsets of ``rest`` fitting into ``cap`` to which no further item of ``rest`` fits."""
        items = sorted(iter_bits(rest), reverse=True)
        lengths = self.lengths

        def rec(pos: int, cap: int, chosen: int, min_skipped: int):
            if pos == len(items):
                if min_skipped > cap:
                    yield chosen
                return
            i = items[pos]
            if lengths[i] <= cap:
                yield from rec(pos + 1, cap - lengths[i], chosen | (1 << i), min_skipped)
            yield from rec(pos + 1, cap, chosen, min(min_skipped, lengths[i]))

        yield from rec(0, cap, 0, self.L + 1)

    def fits(self, mask: int, k: int) -> bool:
        if mask == 0:
            return True
        if k <= 0:
            return False
        if self.failed.get(mask, -1) >= k:
            return False
        total = self.load(mask)
        if total <= self.L:
            return True
        if k == 1 or total > k * self.L:
            self.failed[mask] = max(self.failed.get(mask, -1), k)
            return False
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        for col in self.columns(rest, self.L - self.lengths[top]):
            if self.fits(rest & ~col, k - 1):
                return True
        self.failed[mask] = max(self.failed.get(mask, -1), k)
        return False


def z_d(e: Instance, lower: int | None = None) -> int:
    """Minimum number of bins, by column branch-and-bound.

    ``lower`` may carry a known lower bound such as the rounded-up proper
    relaxation value; otherwise that value is computed here.
    """
    if sum(e.lengths) <= e.L:
        return 1
    if lower is None:
        lower = _ceil(z_c_proper(e))
    lower = max(lower, _ceil(Fraction(sum(e.lengths), e.L)))
    upper = first_fit_decreasing(e)
    packer = _Packer(e)
    full = full_mask(e.n)
    for k in range(lower, upper):
        if packer.fits(full, k):
            return k
    return upper


def z_d_dp(e: Instance) -> int:
    """Oracle: DP over item subsets keeping (bins, fill of the open bin)."""
    n, L, ls = e.n, e.L, e.lengths
    best = [(n + 1, 0)] * (1 << n)
    best[0] = (1, 0)
    for mask in range(1 << n):
        bins, fill = best[mask]
        if bins > n:
            continue
        rest = full_mask(n) & ~mask
        for i in iter_bits(rest):
            x = ls[i]
            cand = (bins, fill + x) if fill + x <= L else (bins + 1, x)
            nxt = mask | (1 << i)
            if cand < best[nxt]:
                best[nxt] = cand
    return best[full_mask(n)][0]


def z_d_patterns(patterns: Iterable[int], n: int) -> int:
    """Minimum number of members of a down-closed pattern set partitioning all items."""
    pset = set(patterns)
    full = full_mask(n)
    if full in pset:
        return 1
    if any((full ^ a) in pset for a in pset):
        return 2
    size = 1 << n
    f = [n + 1] * size
    f[0] = 0
    for r in range(1, size):
        low = r & -r
        rest = r ^ low
        best = n + 1
        s = rest
        while True:
            cand = s | low
            if cand in pset:
                v = f[r ^ cand] + 1
                if v < best:
                    best = v
            if s == 0:
                break
            s = (s - 1) & rest
        f[r] = best
    return f[full]


# -- relaxations --------------------------------------------------------------


def z_c_patterns(patterns: Iterable[int], n: int) -> Fraction:
    sol = minimize_unit_sum(patterns, n)
    if not sol.ok:
        raise ConsistencyViolation("pattern set does not cover every item")
    return sol.objective


def z_c_proper(e: Instance) -> Fraction:
    feas = proper_masks(e)
    return z_c_patterns((a for a, ok in enumerate(feas) if ok and a), e.n)


def _integer_vectors(lengths, L: int, cap: int) -> list[tuple[int, ...]]:
    m = len(lengths)
    out: list[tuple[int, ...]] = []
    a = [0] * m

    def rec(i: int, cap_left: int):
        if i == m:
            if any(a):
                out.append(tuple(a))
                if len(out) > cap:
                    raise PatternExplosion(f"more than {cap} feasible patterns")
            return
        for k in range(cap_left // lengths[i] + 1):
            a[i] = k
            rec(i + 1, cap_left - k * lengths[i])
        a[i] = 0

    rec(0, L)
    return out


def integer_patterns(e: InstanceM, cap: int = DEFAULT_PATTERN_CAP) -> list[tuple[int, ...]]:
    """All nonzero ``a >= 0`` with ``l.a <= L``, in lexicographic order."""
    return _integer_vectors(e.lengths, e.L, cap)


def feasible_patterns(e: Instance, cap: int = DEFAULT_PATTERN_CAP) -> frozenset[tuple[int, ...]]:
    """Integer patterns indexed by the items of ``e`` (no demand bound)."""
    return frozenset(_integer_vectors(e.lengths, e.L, cap))


def is_feasible_pattern(e: Instance, a) -> bool:
    if len(a) != e.n or any(x < 0 for x in a):
        raise DimensionMismatch(f"expected {e.n} nonnegative entries, got {tuple(a)}")
    return sum(x * y for x, y in zip(a, e.lengths)) <= e.L


def pattern_equivalent(e: Instance, f: Instance) -> bool:
    """Same proper patterns (the classes counted by the enumeration)."""
    return e.n == f.n and proper_masks(e) == proper_masks(f)


def fully_pattern_equivalent(e: Instance, f: Instance, cap: int = DEFAULT_PATTERN_CAP) -> bool:
    """Same integer feasible patterns, which also preserves ``z_C^f``."""
    return e.n == f.n and feasible_patterns(e, cap) == feasible_patterns(f, cap)


def z_c_feasible(e: InstanceM | Instance, cap: int = DEFAULT_PATTERN_CAP) -> Fraction:
    if isinstance(e, Instance):
        e = e.to_m_form()
    cols = integer_patterns(e, cap)
    sol = min_sum_columns(cols, list(e.demands))
    return sol.objective


# -- reports ------------------------------------------------------------------


def tighten_L(e: Instance) -> Instance:
    """Same proper patterns with ``L`` lowered to the longest proper pattern."""
    loads = [0] * (1 << e.n)
    best = 0
    for a in range(1, 1 << e.n):
        low = a & -a
        loads[a] = loads[a ^ low] + e.lengths[low.bit_length() - 1]
        if loads[a] <= e.L and loads[a] > best:
            best = loads[a]
    return Instance(best, e.lengths)


def gaps(e: Instance, want_feasible: bool = False, cap: int = DEFAULT_PATTERN_CAP) -> GapReport:
    zcp = z_c_proper(e)
    zd = z_d(e, lower=_ceil(zcp))
    zcf = z_c_feasible(e, cap) if want_feasible else None
    report = GapReport(zd, zcp, zcf)
    return GapReport(zd, zcp, zcf, bound_flags(e, report))


def bound_flags(e: Instance, r: GapReport) -> BoundFlags:
    """Evaluate the structural bounds and cross-check them against ``r``."""
    n = e.n
    zd, zcp = r.z_d, r.z_c_proper
    feas = proper_masks(e)
    full = full_mask(n)

    zd_is_1 = sum(e.lengths) <= e.L
    zd_le_2 = any(feas[a] and feas[full ^ a] for a in range(1 << n))

    if zd == 1:
        lb = Fraction(1)
    elif zd == 2:
        lb = Fraction(n, n - 1)
    else:
        lb = Fraction(2)
    chan_ok = zd <= Fraction(4, 3) * _ceil(zcp)

    problems = []
    if zd_is_1 != (zd == 1):
        problems.append("z_D = 1 must hold exactly when the total length fits")
    if zd_le_2 != (zd <= 2):
        problems.append("z_D <= 2 must hold exactly when a complementary feasible pair exists")
    if not 1 <= zcp <= zd <= n:
        problems.append("1 <= z_C^p <= z_D <= n violated")
    if zcp < lb or (zd > 2 and not zcp > 2):
        problems.append(f"z_C^p = {zcp} below its lower bound {lb}")
    if zd == 1 and zcp != 1:
        problems.append("z_D = 1 forces z_C^p = 1")
    if zd == 3 and not r.delta_proper < 1:
        problems.append("z_D = 3 forces a proper gap below 1")
    if not chan_ok:
        problems.append("z_D <= 4/3 ceil(z_C^p) violated")
    if r.z_c_feasible is not None:
        if not r.z_c_feasible <= zcp:
            problems.append("z_C^f <= z_C^p violated")
        if r.z_c_feasible < Fraction(sum(e.lengths), e.L):
            problems.append("material bound violated")
    if problems:
        raise ConsistencyViolation(f"{e}: " + "; ".join(problems))
    return BoundFlags(zd_is_1, zd_le_2, lb, chan_ok)


CSV_HEADER = "id,n,L,z_D,z_C^p,z_C^f,Delta_p,proper_IRUP"


def csv_row(instance_id: str, e: Instance, r: GapReport) -> str:
    zcf = "" if r.z_c_feasible is None else format_rational(r.z_c_feasible)
    return ",".join(
        [
            instance_id,
            str(e.n),
            str(e.L),
            str(r.z_d),
            format_rational(r.z_c_proper),
            zcf,
            format_rational(r.delta_proper),
            "1" if r.proper_irup else "0",
        ]
    )
