"""Random corpora and brute-force oracles used across the test modules."""

import itertools
import random
from fractions import Fraction

from irup.core import Instance, make_instance
from irup.errors import PatternExplosion
from irup.metrics import gaps, z_d_dp
from irup.realization import proper_masks

RANDOM_SEED = 20240601
RANDOM_COUNT = 1000
FEASIBLE_CAP = 3000


def random_instances(count=RANDOM_COUNT, seed=RANDOM_SEED, max_n=10):
    """Mixed corpus: easy and tight capacities, small and large lengths."""
    rnd = random.Random(seed)
    out = []
    for _ in range(count):
        n = rnd.randint(1, max_n)
        L = rnd.choice([rnd.randint(1, 12), rnd.randint(10, 60), rnd.randint(50, 400)])
        lo = rnd.choice([1, max(1, L // 5), max(1, L // 3)])
        lengths = [rnd.randint(min(lo, L), L) for _ in range(n)]
        out.append(make_instance(L, lengths))
    return out


def check_bounds(e: Instance):
    """Every bound relation on one instance; returns the list of violations."""
    r = gaps(e)
    try:
        zcf = gaps(e, want_feasible=True, cap=FEASIBLE_CAP).z_c_feasible
    except PatternExplosion:
        zcf = None
    n, zd, zcp = e.n, r.z_d, r.z_c_proper
    bad = []
    if zcf is not None and not zcf <= zcp:
        bad.append("z_C^f <= z_C^p")
    if not zcp <= zd:
        bad.append("z_C^p <= z_D")
    if (zd == 1) != (sum(e.lengths) <= e.L):
        bad.append("z_D = 1 iff the total fits")
    if zd == 2 and not zcp >= Fraction(n, n - 1):
        bad.append("z_D = 2 gives z_C^p >= n/(n-1)")
    if zd == 2 and not zd - zcp <= Fraction(n - 2, n - 1):
        bad.append("z_D = 2 gives a gap <= (n-2)/(n-1)")
    if zd > 2 and not zcp > 2:
        bad.append("z_D > 2 gives z_C^p > 2")
    if zd == 3 and not zd - zcp < 1:
        bad.append("z_D = 3 gives a gap below 1")
    ceil = -((-zcp.numerator) // zcp.denominator)
    if not zd <= Fraction(4, 3) * ceil:
        bad.append("z_D <= 4/3 ceil(z_C^p)")
    if zcf is not None and not zd - zcp <= zd - zcf:
        bad.append("proper gap <= gap")
    if zcf is not None and zcf < Fraction(sum(e.lengths), e.L):
        bad.append("material bound")
    if z_d_dp(e) != zd:
        bad.append("branch-and-bound differs from the subset DP")
    return bad, zcf is not None


def brute_force_classes(n, patience=6, max_L=40):
    """Distinct proper pattern sets over all integer instances, grown in L
    until ``patience`` consecutive capacities add nothing new."""
    seen = set()
    quiet = 0
    for L in range(1, max_L + 1):
        before = len(seen)
        for ls in itertools.combinations_with_replacement(range(1, L + 1), n):
            feas = proper_masks(Instance(L, ls))
            seen.add(frozenset(a for a, ok in enumerate(feas) if ok))
        quiet = quiet + 1 if len(seen) == before else 0
        if quiet >= patience:
            return seen, L
    return seen, max_L
