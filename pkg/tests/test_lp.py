import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from irup.enumeration import enumerate_classes
from irup.errors import EmptyColumnSet, MalformedSystem
from irup.lp import (
    LinearSystem,
    Status,
    check_unit_sum,
    feasible,
    minimize,
    minimize_unit_sum,
    min_sum_columns,
)
from irup.realization import separation_system, realizability_system


def weight_at_most(n, k):
    return [a for a in range(1, 1 << n) if a.bit_count() <= k]


def vertex_oracle(columns, n):
    """Minimum of sum(x) over all basic solutions, by brute force."""
    best = None
    cols = [c for c in columns if c]
    for size in range(1, n + 1):
        for subset in itertools.combinations(cols, size):
            x = solve_square(subset, n)
            if x is not None and all(v >= 0 for v in x):
                s = sum(x)
                best = s if best is None or s < best else best
    return best


def solve_square(subset, n):
    # Gaussian elimination on the n x |S| system A_S x = 1; unique solutions only
    k = len(subset)
    rows = [[Fraction((a >> i) & 1) for a in subset] + [Fraction(1)] for i in range(n)]
    r = 0
    pivots = []
    for c in range(k):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            return None
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    if any(row[k] != 0 for row in rows[r:]):
        return None
    return [rows[i][k] / rows[i][i] for i in range(k)]


def test_unit_sum_examples():
    assert minimize_unit_sum(weight_at_most(3, 2), 3).objective == Fraction(3, 2)
    sol = minimize_unit_sum(weight_at_most(4, 3), 4)
    assert sol.objective == Fraction(4, 3)
    assert minimize_unit_sum([1], 1).objective == 1


def test_unit_sum_witness():
    sol = minimize_unit_sum(weight_at_most(4, 3), 4)
    assert sol.status is Status.OPTIMAL
    assert check_unit_sum(sol.values, 4)
    assert sum(sol.values.values()) == sol.objective


def test_unit_sum_errors():
    with pytest.raises(EmptyColumnSet):
        minimize_unit_sum([], 3)
    with pytest.raises(EmptyColumnSet):
        minimize_unit_sum([0], 3)
    # item 2 is never covered
    assert minimize_unit_sum([1], 2).status is Status.INFEASIBLE


def test_general_columns():
    sol = min_sum_columns([(3,), (2,), (1,)], [3])
    assert sol.objective == 1
    # x2 = t leaves a total of 2 + t/6
    sol = min_sum_columns([(2, 0), (1, 1), (0, 3)], [2, 3])
    assert sol.objective == 2 and sol.values == {0: 1, 2: 1}


def test_separation_system_examples():
    # all patterns with at most two ones, n = 3
    sys = realizability_system(weight_at_most(3, 2) + [0], 3)
    sol = feasible(sys)
    assert sol.status is Status.FEASIBLE and sys.check(sol.values)
    assert sys.check([Fraction(v) for v in (1, 1, 1, 2)])
    # n = 2, only the singletons
    sys = realizability_system([0, 1, 2], 2)
    assert feasible(sys).ok and sys.check([Fraction(1)] * 3)
    # (1,1,0) fits but the single item (0,0,1) does not
    assert feasible(separation_system([3], [4], 3)).status is Status.INFEASIBLE


def test_malformed():
    sys = LinearSystem(["a", "b"])
    with pytest.raises(MalformedSystem):
        sys.add([1], "<=", 1)
    with pytest.raises(MalformedSystem):
        sys.add([1, 1], "<", 1)
    with pytest.raises(MalformedSystem):
        feasible(LinearSystem([]))
    with pytest.raises(MalformedSystem):
        minimize(sys, [1])


def test_minimize_and_dump():
    sys = LinearSystem(["x", "y"])
    sys.add([1, 1], ">=", 2)
    sys.add([1, -1], "=", Fraction(1, 2))
    sol = minimize(sys, [3, 1])
    # x = y + 1/2 and y >= 3/4
    assert sol.objective == Fraction(9, 2)
    assert sol.values == (Fraction(5, 4), Fraction(3, 4))
    assert sys.check(sol.values)
    assert sys.dump().splitlines()[1] == "1 1 >= 2"
    unbounded = minimize(sys, [-1, 0])
    assert unbounded.status is Status.UNBOUNDED


def all_column_sets(n):
    nonzero = list(range(1, 1 << n))
    for r in range(len(nonzero) + 1):
        for s in itertools.combinations(nonzero, r):
            if s:
                yield s


@pytest.mark.parametrize("n", [1, 2, 3])
def test_vertex_enumeration_agrees(n):
    for cols in all_column_sets(n):
        sol = minimize_unit_sum(cols, n)
        expected = vertex_oracle(cols, n)
        if expected is None:
            assert sol.status is Status.INFEASIBLE
        else:
            assert sol.objective == expected


def tableau_unit_sum(columns, n):
    """Same LP through the fraction-free tableau engine."""
    cols = sorted(set(columns))
    sys = LinearSystem([f"x{a}" for a in cols])
    for i in range(n):
        sys.add([(a >> i) & 1 for a in cols], "=", 1)
    return minimize(sys, [1] * len(cols))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, (1 << n) - 1), min_size=1))))
def test_two_engines_agree(args):
    n, cols = args
    a = minimize_unit_sum(cols, n)
    b = tableau_unit_sum(cols, n)
    assert a.ok == b.ok
    if a.ok:
        assert a.objective == b.objective
        assert check_unit_sum(a.values, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.integers(1, (1 << n) - 1)),
        st.sets(st.integers(1, (1 << n) - 1)),
    )
))
def test_more_columns_never_hurt(args):
    n, cols, extra = args
    base = set(cols) | {1 << i for i in range(n)}
    small = minimize_unit_sum(base, n).objective
    large = minimize_unit_sum(base | extra, n).objective
    assert large <= small


def test_pivot_counts_stay_small():
    cap = 5000
    for n in range(2, 7):
        classes = []
        enumerate_classes(n, classes.append)
        for c in classes:
            sol = minimize_unit_sum(c.patterns, n)
            assert sol.pivots < cap
            sys = realizability_system(c.patterns, n)
            res = feasible(sys)
            assert res.ok and res.pivots < cap and sys.check(res.values)
