"""Strategy-iteration driver, policy, winner and counter-strategy extraction."""

from __future__ import annotations

import random

import pytest

from pgsi import (
    GameError,
    NodeRecord,
    ParityGame,
    evaluate,
    extract_counter_strategy,
    extract_winners,
    format_trace,
    game_valuation_less,
    generate,
    improve_locally,
    improvement_arena,
    initial_strategy,
    make_strategy,
    node_ids,
    reward,
    run,
    sigma_init,
    zielonka_solve,
)
from conftest import seeded_game


def test_initial_strategy_picks_best_reward():
    g = ParityGame(
        [
            NodeRecord(0, 0, (1, 2)),
            NodeRecord(1, 5, (0,)),
            NodeRecord(1, 2, (0,)),
            NodeRecord(0, 7, (1, 4)),
            NodeRecord(1, 3, (3,)),
            NodeRecord(1, 1, (5,)),
        ]
    )
    iota = initial_strategy(g)
    assert iota[0] == 2  # rew 2 beats rew -5
    assert iota[3] == 4  # rew -3 beats rew -5


def test_initial_strategy_on_family():
    # x prefers y (reward -5) over w (reward -7); the whole map coincides
    # with the first initialization-family strategy
    for n in (1, 2, 3):
        g = generate(n)
        ids = node_ids(n)
        iota = initial_strategy(g)
        assert iota[ids["x"]] == ids["y"]
        assert iota == sigma_init(n, -2)


def test_run_on_unimprovable_game():
    g = ParityGame([NodeRecord(0, 2, (0,))])
    res = run(g)
    assert res.iteration_count == 1
    assert res.w0 == {0}
    assert not res.w1


def test_run_family_counts():
    assert run(generate(1)).iteration_count == 17
    res = run(generate(2))
    assert res.iteration_count == 43
    assert res.w1 == frozenset(range(39))
    assert not res.w0


def test_run_rejects_invalid_games():
    with pytest.raises(GameError, match="duplicate"):
        run(ParityGame([NodeRecord(0, 1, (1,)), NodeRecord(1, 1, (0,))]))
    with pytest.raises(GameError, match="total"):
        run(ParityGame([NodeRecord(0, 1, (1,)), NodeRecord(1, 2, ())]))


def test_extract_winners_even_cycles():
    g = ParityGame([NodeRecord(1, 2, (0,)), NodeRecord(1, 4, (1,))])
    xi = evaluate(g, make_strategy(g, {}))
    w0, w1 = extract_winners(g, xi)
    assert w0 == {0, 1}
    assert not w1


def test_extract_winners_matches_oracle_on_mixed_game():
    g = ParityGame(
        [
            NodeRecord(0, 2, (0, 1)),
            NodeRecord(1, 3, (1, 2)),
            NodeRecord(0, 1, (3,)),
            NodeRecord(1, 4, (2,)),
        ]
    )
    res = run(g)
    wins = zielonka_solve(g)
    assert (res.w0, res.w1) == (wins.w0, wins.w1)


def test_counter_strategy_forced_and_minimal():
    g = generate(2)
    res = run(g)
    ids = node_ids(2)
    keys = evaluate(g, res.sigma_final).keys()
    assert res.tau[ids["p"]] == ids["q"]  # single successor
    for i in (0, 1):
        h = ids[f"h{i}"]
        chosen = res.tau[h]
        for u in g.successors(h):
            ku = (keys[u], reward(g, u))
            kc = (keys[chosen], reward(g, chosen))
            assert kc <= ku


def _lasso_cycle_max(game, sigma, tau, start):
    seen = {}
    play = []
    v = start
    while v not in seen:
        seen[v] = len(play)
        play.append(v)
        v = sigma.get(v) if game.owner(v) == 0 else tau.get(v)
    cycle = play[seen[v]:]
    return max(game.priority(u) for u in cycle)


def test_counter_strategy_wins_everywhere_on_family():
    g = generate(2)
    res = run(g)
    for v in g.nodes():
        assert _lasso_cycle_max(g, res.sigma_final, res.tau, v) % 2 == 1


def test_monotonicity_and_arena_discipline_along_runs():
    games = [seeded_game(s) for s in range(12)] + [generate(1), generate(2)]
    for g in games:
        res = run(g, record_trace=True)
        trace = res.trace
        assert len(trace) == res.iteration_count
        for (s0, x0), (s1, x1) in zip(trace, trace[1:]):
            assert game_valuation_less(x0, x1)
            arena = improvement_arena(g, s0, x0)
            for v in g.player_nodes(0):
                assert s1[v] in arena.edges(v)


def test_policy_is_deterministic_in_the_valuation():
    g = generate(1)
    iota = initial_strategy(g)
    xi = evaluate(g, iota)
    assert improve_locally(g, iota, xi) == improve_locally(g, iota, xi)


def test_run_respects_iteration_budget():
    with pytest.raises(RuntimeError):
        run(generate(2), max_iterations=10)


def test_run_with_custom_policy_matches_default():
    g = generate(1)
    res_a = run(g)
    res_b = run(g, policy=lambda gm, s, x: improve_locally(gm, s, x))
    assert res_a.iteration_count == res_b.iteration_count
    assert res_a.sigma_final == res_b.sigma_final


def test_format_trace_shape():
    g = generate(1)
    res = run(g, record_trace=True)
    text = format_trace(g, res.trace)
    lines = text.strip().split("\n")
    assert len(lines) == res.iteration_count
    first = lines[0].split("\t")
    assert first[0] == "0"
    assert len(first) == 1 + len(g.player_nodes(0))
    assert all("→" in cell for cell in first[1:])
