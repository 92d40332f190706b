import itertools

import pytest
from hypothesis import given, settings, strategies as st

from irup.core import Pattern, make_instance
from irup.dominance import build_table, is_downward_closed
from irup.enumeration import enumerate_classes
from irup.errors import NotDownwardClosed, OverlappingSets, Unrealizable
from irup.realization import (
    class_from_maximal,
    partially_realizable,
    pattern_class,
    proper_patterns,
    realize,
)


def P(*v):
    return Pattern.from_vector(v)


SINGLETONS_3 = [0, 1, 2, 4]


def test_realize_singletons():
    e = realize(pattern_class(3, SINGLETONS_3))
    assert e.n == 3
    assert proper_patterns(e).patterns == frozenset(SINGLETONS_3)


def test_realize_one_pair():
    # (1,1,0) fits; its closure adds only the singletons
    c = class_from_maximal(3, [P(1, 1, 0), P(0, 0, 1)])
    assert c.patterns == frozenset({0, 1, 2, 3, 4})
    e = realize(c)
    assert proper_patterns(e).patterns == c.patterns
    # the hand-built representative
    assert proper_patterns(make_instance(3, [1, 2, 3])).patterns == c.patterns


def test_maximal_pair_alone_is_not_a_class():
    # (0,0,1) is not below (1,1,0), so this set misses a singleton
    c = class_from_maximal(3, [P(1, 1, 0)])
    assert 4 not in c.patterns
    with pytest.raises(Unrealizable):
        realize(c)


def test_not_downward_closed():
    bad = pattern_class(3, [0, 1, 2, 4, 6])  # (0,1,1) without (1,1,0)
    with pytest.raises(NotDownwardClosed):
        realize(bad)


def test_partial_examples():
    assert not partially_realizable([P(1, 1, 0)], [P(0, 0, 1)], 3)
    assert partially_realizable([1, 2, 4], [7], 3)
    assert partially_realizable([], [], 3)
    with pytest.raises(OverlappingSets):
        partially_realizable([3], [3], 3)


def test_proper_pattern_examples():
    c = proper_patterns(make_instance(2, [1, 1, 1]))
    assert c.patterns == frozenset(a for a in range(8) if a.bit_count() <= 2)
    assert proper_patterns(make_instance(2, [1, 1])).patterns == frozenset(range(4))
    assert proper_patterns(make_instance(1, [1])).patterns == frozenset({0, 1})


@pytest.mark.parametrize("n", range(1, 7))
def test_round_trip_every_class(n):
    classes = []
    enumerate_classes(n, classes.append)
    for c in classes:
        e = realize(c)
        assert e.n == n
        assert proper_patterns(e).patterns == c.patterns


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda n: st.integers(1, 50).flatmap(
        lambda L: st.lists(st.integers(1, L), min_size=n, max_size=n).map(lambda ls: (L, ls))
    )
))
def test_proper_patterns_are_classes(args):
    L, ls = args
    e = make_instance(L, ls)
    c = proper_patterns(e)
    t = build_table(e.n)
    assert is_downward_closed(c.patterns, t)
    assert all(1 << i in c.patterns for i in range(e.n)) and 0 in c.patterns


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.integers(0, (1 << n) - 1), max_size=4),
        st.sets(st.integers(0, (1 << n) - 1), max_size=4),
        st.integers(0, (1 << n) - 1),
    )
))
def test_partial_monotone(args):
    n, le, gt, extra = args
    le, gt = le - gt, gt - le
    if partially_realizable(le, gt, n):
        return
    # growing either side keeps the system infeasible
    if extra not in gt:
        assert not partially_realizable(le | {extra}, gt, n)
    if extra not in le:
        assert not partially_realizable(le, gt | {extra}, n)


def test_partial_agrees_with_classes():
    # a pair (le, gt) is feasible iff some class separates it
    n = 3
    classes = []
    enumerate_classes(n, classes.append)
    masks = range(1 << n)
    for le_size, gt_size in [(1, 1), (2, 1), (1, 2)]:
        for le in itertools.combinations(masks, le_size):
            for gt in itertools.combinations(masks, gt_size):
                if set(le) & set(gt):
                    continue
                expected = any(
                    set(le) <= c.patterns and not set(gt) & c.patterns for c in classes
                )
                assert partially_realizable(le, gt, n) == expected
