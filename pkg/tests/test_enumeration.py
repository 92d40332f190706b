import time

import pytest

from irup.core import iter_bits
from irup.dominance import build_table, is_downward_closed
from irup.enumeration import CSP, Engine, enumerate_classes, histogram_by_zd, run, summary_line
from irup.errors import NTooLarge
from irup.realization import proper_patterns, realize
from irup.search import EnumState

from helpers import brute_force_classes
from reference import CLASS_COUNT_8, CLASS_COUNTS, HISTOGRAM_8


@pytest.mark.parametrize("n", range(1, 7))
def test_class_counts(n):
    assert enumerate_classes(n) == CLASS_COUNTS[n]


@pytest.mark.slow
def test_class_count_7():
    assert enumerate_classes(7) == CLASS_COUNTS[7]


@pytest.mark.extended
def test_class_count_8():
    assert enumerate_classes(8) == CLASS_COUNT_8


@pytest.mark.parametrize("n", [0, 17])
def test_bad_n(n):
    with pytest.raises(NTooLarge):
        enumerate_classes(n)


@pytest.mark.parametrize("seed", [1, 2, 3])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_random_strategy_same_classes(n, seed):
    a, b = [], []
    enumerate_classes(n, a.append)
    enumerate_classes(n, b.append, strategy="random", seed=seed)
    assert {c.patterns for c in a} == {c.patterns for c in b}


@pytest.mark.parametrize("every", [2, 3])
def test_sparse_lp_checks(every):
    a, b = [], []
    enumerate_classes(5, a.append)
    enumerate_classes(5, b.append, lp_every=every)
    assert [c.patterns for c in a] == [c.patterns for c in b]


def test_split_run_is_deterministic():
    a, b = [], []
    enumerate_classes(5, a.append)
    assert enumerate_classes(5, b.append, threads=2, split_depth=3) == len(a)
    assert [c.to_line() for c in a] == [c.to_line() for c in b]
    assert run(6, None, threads=2, split_depth=4) == CLASS_COUNTS[6]


@pytest.mark.parametrize("n", range(1, 6))
def test_class_properties(n):
    t = build_table(n)
    classes = []
    enumerate_classes(n, classes.append)
    assert len({c.patterns for c in classes}) == len(classes)
    for c in classes:
        assert is_downward_closed(c.patterns, t)
        assert all(1 << i in c.patterns for i in range(n))
        assert proper_patterns(realize(c)).patterns == c.patterns


@pytest.mark.parametrize("n", range(1, 5))
def test_brute_force_oracle(n):
    found, _ = brute_force_classes(n)
    classes = []
    enumerate_classes(n, classes.append)
    assert found == {c.patterns for c in classes}


def test_node_invariants():
    n = 4
    eng = Engine(n, CSP)
    t = eng.table
    stack = [eng.root()]
    while stack:
        node = stack.pop()
        state = EnumState.from_node(n, node)
        assert not (state.p_le & state.p_gt or state.p_le & state.p_u or state.p_gt & state.p_u)
        for a in state.p_le:
            assert not any(a != b and t.holds(a, b) for b in state.p_le)
        for a in state.p_gt:
            assert not any(a != b and t.holds(b, a) for b in state.p_gt)
        alive, w = eng.check(node, force=True)
        if alive and node.unk:
            a = eng.choose(node)
            stack.extend(eng.children(node, a, w))


@pytest.mark.parametrize("n", range(1, 7))
def test_histogram_invariants(n):
    hist = histogram_by_zd(n)
    assert sum(hist.values()) == CLASS_COUNTS[n]
    assert hist[1] == 1 and hist[n] == 1
    assert max(hist) == n


@pytest.mark.extended
def test_histogram_8():
    assert histogram_by_zd(8) == HISTOGRAM_8


def test_summary_line():
    line = summary_line(3, 5, time.perf_counter())
    n, total, elapsed = line.split()
    assert (n, total) == ("3", "5") and float(elapsed) >= 0


def test_root_starts_from_singletons():
    eng = Engine(3)
    root = eng.root()
    closure = eng.table.down_of(iter_bits(root.le))
    assert set(iter_bits(closure)) == {0, 1, 2, 4}
    assert set(iter_bits(root.unk)) == {3, 5, 6, 7}
