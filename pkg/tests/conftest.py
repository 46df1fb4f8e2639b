"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from pgsi import ParityGame, Strategy, make_strategy, random_game


def sample_strategy(game: ParityGame, rng: random.Random) -> Strategy:
    """Uniformly random valid player-0 strategy."""
    return make_strategy(
        game, {v: rng.choice(game.successors(v)) for v in game.player_nodes(0)}
    )


def seeded_game(seed: int, max_nodes: int = 9) -> ParityGame:
    """Deterministic random game with feasible out-degree bounds."""
    rng = random.Random(seed)
    count = rng.randint(2, max_nodes)
    hi = rng.randint(1, count - 1)
    lo = rng.randint(1, hi)
    return random_game(count, (lo, hi), seed * 7919 + 13)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
