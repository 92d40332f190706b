import itertools
import random

import pytest

from irup.core import full_mask, make_instance
from irup.enumeration import GAME, run
from irup.errors import NotMonotone, NTooLarge
from irup.realization import proper_masks
from irup.wsg import count_weighted_games, is_weighted, monotone_functions, oracle_count, weighted_witness


def coalitions(n, pred):
    return [a for a in range(1 << n) if pred(a)]


def separates(w, q, winning, n):
    win = set(winning)
    return all(
        (sum(w[i] for i in range(n) if a >> i & 1) >= q) == (a in win) for a in range(1 << n)
    )


def test_single_voter():
    assert count_weighted_games(1) == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_engine_matches_oracle(n):
    assert count_weighted_games(n) == oracle_count(n)


def test_small_counts_from_oracle():
    # frozen after the oracle and the engine agreed
    assert [oracle_count(n) for n in range(1, 6)] == [1, 3, 8, 25, 117]


def test_majority():
    win = coalitions(3, lambda a: a.bit_count() >= 2)
    assert is_weighted(win, 3)
    w, q = weighted_witness(win, 3)
    assert separates(w, q, win, 3)
    assert separates((1, 1, 1), 2, win, 3)


def test_two_pairs_not_weighted():
    win = coalitions(4, lambda a: a & 0b0011 == 0b0011 or a & 0b1100 == 0b1100)
    assert not is_weighted(win, 4)
    # no small integer weights either
    for w in itertools.product(range(5), repeat=4):
        for q in range(1, 17):
            assert not separates(w, q, win, 4)


def test_dictator():
    win = coalitions(2, lambda a: a & 0b10)
    assert is_weighted(win, 2)
    assert separates((0, 1), 1, win, 2)


def test_not_monotone():
    with pytest.raises(NotMonotone):
        is_weighted([0, 3], 2)
    with pytest.raises(NotMonotone):
        is_weighted([1], 2)  # {1} wins, {1,2} loses
    with pytest.raises(NotMonotone):
        is_weighted([1, 2], 2)  # grand coalition missing


def test_count_rejects_large_n():
    with pytest.raises(NTooLarge):
        count_weighted_games(17)


def is_monotone_table(f, n):
    return all(
        not (f >> a & 1) or (f >> (a | 1 << i) & 1) for a in range(1 << n) for i in range(n)
    )


@pytest.mark.parametrize("n", range(0, 5))
def test_monotone_functions_brute_force(n):
    expected = {f for f in range(1 << (1 << n)) if is_monotone_table(f, n)}
    assert set(monotone_functions(n)) == expected


def test_monotone_function_counts():
    assert [len(monotone_functions(n)) for n in range(6)] == [2, 3, 6, 20, 168, 7581]


@pytest.mark.parametrize("n", range(1, 5))
def test_every_counted_game_has_integer_weights(n):
    games = []
    run(n, games.append, mode=GAME)
    full = full_mask(n)
    for g in games:
        win = [a for a in range(full + 1) if a not in g.patterns]
        w, q = weighted_witness(win, n)
        assert all(isinstance(x, int) and x >= 0 for x in w)
        assert separates(w, q, win, n)
        assert list(w) == sorted(w)  # voters ordered by desirability


def test_instances_give_games():
    rnd = random.Random(5)
    for _ in range(100):
        n = rnd.randint(2, 7)
        L = rnd.randint(2, 30)
        e = make_instance(L, [rnd.randint(1, L) for _ in range(n)])
        if sum(e.lengths) <= L:
            continue
        feas = proper_masks(e)
        win = [a for a, ok in enumerate(feas) if not ok]
        assert separates(e.lengths, L + 1, win, n)
        assert is_weighted(win, n)
