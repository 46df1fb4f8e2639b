"""The recursive winning-set oracle."""

from __future__ import annotations

from pgsi import NodeRecord, ParityGame, attractor, generate, run, zielonka_solve
from conftest import seeded_game


def test_attractor_fixpoints():
    g = ParityGame([NodeRecord(0, 0, (1,)), NodeRecord(1, 1, (0,))])
    assert attractor(g, 0, {0, 1}) == {0, 1}
    assert attractor(g, 0, set()) == set()


def test_attractor_one_step():
    g = ParityGame([NodeRecord(0, 0, (1,)), NodeRecord(1, 1, (1,))])
    assert attractor(g, 0, {1}) == {0, 1}
    # opponent-owned node with an escape stays out
    g2 = ParityGame(
        [NodeRecord(1, 0, (1, 2)), NodeRecord(1, 1, (1,)), NodeRecord(1, 2, (2,))]
    )
    assert attractor(g2, 0, {1}) == {1}


def test_attractor_monotone_and_idempotent():
    g = seeded_game(3, max_nodes=12)
    small = attractor(g, 1, {0})
    big = attractor(g, 1, {0, 1})
    assert small <= big
    assert attractor(g, 1, small) == small


def test_single_even_self_loop():
    g = ParityGame([NodeRecord(1, 2, (0,))])
    wins = zielonka_solve(g)
    assert wins.w0 == {0}
    assert not wins.w1


def test_family_completely_won_by_player_1():
    for n in (1, 2, 3, 4):
        g = generate(n)
        wins = zielonka_solve(g)
        assert wins.w1 == frozenset(g.nodes())
        assert not wins.w0


def test_partition_and_agreement_on_random_games():
    for seed in range(40):
        g = seeded_game(seed, max_nodes=30)
        wins = zielonka_solve(g)
        assert wins.w0 | wins.w1 == frozenset(g.nodes())
        assert not wins.w0 & wins.w1
        res = run(g)
        assert (res.w0, res.w1) == (wins.w0, wins.w1)


def test_duplicate_priorities_are_fine_for_the_oracle():
    g = ParityGame(
        [NodeRecord(0, 1, (1,)), NodeRecord(1, 1, (0,)), NodeRecord(1, 2, (0, 2))]
    )
    wins = zielonka_solve(g)
    assert wins.w0 | wins.w1 == frozenset(g.nodes())
