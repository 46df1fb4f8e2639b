"""Game model, validation, PGSolver-format round trips, random generation."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgsi import (
    GameError,
    NodeRecord,
    ParityGame,
    ParseError,
    generate,
    make_strategy,
    node_ids,
    parse,
    random_game,
    restrict,
    reward,
    serialize,
    validate,
)
from conftest import sample_strategy, seeded_game


def test_validate_smallest_total_game():
    g = ParityGame([NodeRecord(1, 0, (0,))])
    report = validate(g)
    assert report.is_total
    assert report.self_loop_nodes == {0}
    assert not report.duplicate_priorities
    assert not report.dangling_edges


def test_validate_duplicate_priorities():
    g = ParityGame([NodeRecord(0, 3, (1,)), NodeRecord(1, 3, (0,))])
    assert validate(g).duplicate_priorities == {3}


def test_validate_generated_family():
    g = generate(2)
    report = validate(g)
    assert report.is_total
    assert not report.duplicate_priorities
    assert report.self_loop_nodes == {node_ids(2)["q"]}
    assert report.solver_ready


def test_validate_non_total():
    g = ParityGame([NodeRecord(0, 0, (1,)), NodeRecord(1, 1, ())])
    report = validate(g)
    assert not report.is_total
    assert not report.solver_ready


def test_construction_rejects_dangling_and_bad_owner():
    with pytest.raises(GameError):
        ParityGame([NodeRecord(0, 0, (5,))])
    with pytest.raises(GameError):
        ParityGame([NodeRecord(2, 0, (0,))])
    with pytest.raises(GameError):
        ParityGame([NodeRecord(0, -1, (0,))])


def test_reward_signs():
    g = ParityGame(
        [NodeRecord(0, 2, (1,)), NodeRecord(1, 5, (2,)), NodeRecord(0, 0, (0,))]
    )
    assert reward(g, 0) == 2
    assert reward(g, 1) == -5
    assert reward(g, 2) == 0


def test_restrict_cuts_player0_edges_only():
    g = ParityGame(
        [
            NodeRecord(0, 4, (1, 2, 3)),
            NodeRecord(1, 1, (0,)),
            NodeRecord(1, 2, (0, 3)),
            NodeRecord(0, 3, (0,)),
        ]
    )
    sigma = make_strategy(g, {0: 2, 3: 0})
    view = restrict(g, sigma)
    assert view.successors(0) == (2,)
    assert view.successors(2) == (0, 3)  # player-1 edges untouched
    assert view.priorities == g.priorities


def test_restrict_stays_total(rng):
    g = generate(1)
    for _ in range(5):
        sigma = sample_strategy(g, rng)
        assert validate(restrict(g, sigma)).is_total


def test_parse_basic():
    g = parse("parity 1;\n0 2 0 1;\n1 1 1 0;\n")
    assert len(g) == 2
    assert g.owner(0) == 0
    assert g.priority(0) == 2
    assert g.successors(0) == (1,)
    assert g.owner(1) == 1


def test_parse_header_optional_and_labels():
    g = parse('0 2 0 1 "start";\n1 1 1 0;\n')
    assert g.label(0) == "start"
    assert g.label(1) is None


def test_parse_errors():
    with pytest.raises(ParseError, match="dangling"):
        parse("0 2 0 99;\n1 1 1 0;\n")
    with pytest.raises(ParseError, match="negative"):
        parse("0 -2 0 1;\n1 1 1 0;\n")
    with pytest.raises(ParseError, match="line 2"):
        parse("0 2 0 1;\nnot a node line;\n")
    with pytest.raises(ParseError, match="twice"):
        parse("0 2 0 0;\n0 1 1 0;\n")
    with pytest.raises(ParseError, match="dense"):
        parse("0 2 0 0;\n2 1 1 0;\n")


def test_serialize_is_canonical():
    g = generate(1)
    text = serialize(g)
    assert text.startswith("parity 24;\n")
    assert text.endswith(";\n")
    assert parse(text) == g


def test_roundtrip_on_generated_games():
    for n in (1, 2, 3):
        g = generate(n)
        assert parse(serialize(g)) == g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_roundtrip_on_random_games(seed):
    g = seeded_game(seed)
    assert parse(serialize(g)) == g


def test_random_game_rejects_infeasible():
    with pytest.raises(GameError):
        random_game(1, (1, 1), 0)
    with pytest.raises(GameError):
        random_game(4, (1, 4), 0)
    with pytest.raises(GameError):
        random_game(4, (0, 2), 0)


def test_random_game_deterministic_and_clean():
    a = random_game(5, (1, 3), 42)
    b = random_game(5, (1, 3), 42)
    assert a == b
    for seed in range(20):
        g = random_game(8, (1, 4), seed)
        report = validate(g)
        assert report.is_total
        assert not report.duplicate_priorities
        assert not report.self_loop_nodes
        assert sorted(g.priorities) == list(range(8))


def test_strategy_validation():
    g = ParityGame([NodeRecord(0, 0, (1,)), NodeRecord(1, 1, (0, 1))])
    with pytest.raises(GameError, match="not a successor"):
        make_strategy(g, {0: 0})
    with pytest.raises(GameError, match="misses"):
        make_strategy(g, {})
    with pytest.raises(GameError, match="not owned"):
        make_strategy(g, {0: 1, 1: 0})
    sigma = make_strategy(g, {0: 1})
    assert sigma[0] == 1
    assert sigma.get(1) is None
    with pytest.raises(KeyError):
        sigma[1]
