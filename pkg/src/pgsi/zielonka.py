"""Zielonka's recursive algorithm, used as an independent winning-set oracle.

Kept deliberately simple: it tolerates self-loops and duplicate priorities
and is only ever run at test scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .game import ParityGame


@dataclass(frozen=True)
class WinningSets:
    w0: frozenset[int]
    w1: frozenset[int]


def attractor(game: ParityGame, player: int, target: Iterable[int]) -> frozenset[int]:
    """Least superset of target the player can force the play into."""
    full = frozenset(game.nodes())
    return frozenset(_attract(game, player, frozenset(target), full))


def _attract(
    game: ParityGame, player: int, target: frozenset[int], arena: frozenset[int]
) -> set[int]:
    result = set(target)
    changed = True
    while changed:
        changed = False
        for v in arena:
            if v in result:
                continue
            succ = [u for u in game.successors(v) if u in arena]
            if game.owner(v) == player:
                hit = any(u in result for u in succ)
            else:
                hit = bool(succ) and all(u in result for u in succ)
            if hit:
                result.add(v)
                changed = True
    return result


def zielonka_solve(game: ParityGame) -> WinningSets:
    """Exact winning-set partition of a total parity game."""
    w0, w1 = _solve(game, frozenset(game.nodes()))
    return WinningSets(frozenset(w0), frozenset(w1))


def _solve(
    game: ParityGame, arena: frozenset[int]
) -> tuple[frozenset[int], frozenset[int]]:
    if not arena:
        return frozenset(), frozenset()
    p = max(game.priority(v) for v in arena)
    i = p % 2
    top = frozenset(v for v in arena if game.priority(v) == p)
    a = frozenset(_attract(game, i, top, arena))
    sub = _solve(game, arena - a)
    win = (sub[0], sub[1])
    if not win[1 - i]:
        return (arena, frozenset()) if i == 0 else (frozenset(), arena)
    b = frozenset(_attract(game, 1 - i, win[1 - i], arena))
    rest = _solve(game, arena - b)
    if i == 0:
        return rest[0], rest[1] | b
    return rest[0] | b, rest[1]
