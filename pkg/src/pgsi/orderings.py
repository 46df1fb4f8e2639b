"""Every comparison the algorithm uses.

Relevance and reward order nodes; the set ordering compares node sets by
their most relevant differing node (owning a high even node is good for
player 0, a high odd node bad); node valuations extend it lexicographically
and game valuations are compared pointwise.

Node sets are handled internally as bitmasks indexed by *relevance rank*
(rank 0 = least relevant node).  With that layout the set ordering becomes
plain integer comparison of::

    key(S) = (S & even_ranks) | (~S & odd_ranks)

because the highest bit of ``key(M) ^ key(N)`` is exactly the most relevant
node of the symmetric difference, set on the side that owns it iff that node
is even.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .game import GameError, ParityGame, reward


class OrderingError(GameError):
    """Raised when an ordering is undefined (non-injective priorities)."""


@dataclass(frozen=True)
class RankTables:
    """Per-game lookup tables for rank/mask arithmetic."""

    rank_of: tuple[int, ...]  # node id -> relevance rank
    by_rank: tuple[int, ...]  # relevance rank -> node id
    rew: tuple[int, ...]  # node id -> reward
    bit_of: tuple[int, ...]  # node id -> 1 << rank
    even_ranks: int  # mask of ranks whose node has even priority
    odd_ranks: int
    full: int

    def mask_of(self, nodes: Iterable[int]) -> int:
        m = 0
        for v in nodes:
            m |= self.bit_of[v]
        return m

    def nodes_of(self, mask: int) -> frozenset[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.by_rank[low.bit_length() - 1])
            mask ^= low
        return frozenset(out)

    def set_key(self, mask: int) -> int:
        return (mask & self.even_ranks) | (~mask & self.odd_ranks)


def tables(game: ParityGame) -> RankTables:
    """Rank tables for an injective-priority game (cached on the game)."""
    cached = game._tables_cache
    if cached is not None:
        return cached
    n = len(game)
    prios = game.priorities
    if len(set(prios)) != n:
        raise OrderingError("priorities are not injective")
    by_rank = tuple(sorted(game.nodes(), key=lambda v: prios[v]))
    rank_of = [0] * n
    for r, v in enumerate(by_rank):
        rank_of[v] = r
    rew = tuple(reward(game, v) for v in game.nodes())
    bit_of = tuple(1 << rank_of[v] for v in game.nodes())
    even_ranks = 0
    odd_ranks = 0
    for r, v in enumerate(by_rank):
        if prios[v] % 2 == 0:
            even_ranks |= 1 << r
        else:
            odd_ranks |= 1 << r
    t = RankTables(
        rank_of=tuple(rank_of),
        by_rank=by_rank,
        rew=rew,
        bit_of=bit_of,
        even_ranks=even_ranks,
        odd_ranks=odd_ranks,
        full=(1 << n) - 1,
    )
    game._tables_cache = t
    return t


def relevance_less(game: ParityGame, u: int, v: int) -> bool:
    """u < v in the relevance ordering: strictly smaller priority."""
    return game.priority(u) < game.priority(v)


def reward_less(game: ParityGame, u: int, v: int) -> bool:
    """u before v in the reward ordering: strictly smaller reward."""
    return reward(game, u) < reward(game, v)


def set_less(game: ParityGame, m: Iterable[int], n: Iterable[int]) -> bool:
    """Strict set ordering by the most relevant node of the symmetric difference."""
    t = tables(game)
    return t.set_key(t.mask_of(m)) < t.set_key(t.mask_of(n))


@dataclass(frozen=True)
class NodeValuation:
    """Worst reachable loopless path summary: (cycle node, relevant set, length).

    ``relevant_set`` holds the path nodes strictly more relevant than the
    cycle node; the cycle node itself is never a member.
    """

    cycle_node: int
    relevant_set: frozenset[int]
    path_length: int


def _valuation_key(
    t: RankTables, cycle: int, mask: int, length: int
) -> tuple[int, int, int]:
    rc = t.rew[cycle]
    return (rc, t.set_key(mask), length if rc < 0 else -length)


def valuation_less(game: ParityGame, a: NodeValuation, b: NodeValuation) -> bool:
    """Strict node-valuation ordering.

    Cycle nodes compare by reward, then relevant sets by the set ordering,
    then lengths: for an odd cycle node shorter is smaller, for an even one
    longer is smaller.
    """
    t = tables(game)
    ka = _valuation_key(t, a.cycle_node, t.mask_of(a.relevant_set), a.path_length)
    kb = _valuation_key(t, b.cycle_node, t.mask_of(b.relevant_set), b.path_length)
    return ka < kb


class GameValuation:
    """Total map node -> NodeValuation, stored compactly as parallel arrays."""

    __slots__ = ("game", "_cycle", "_mask", "_length", "_keys")

    def __init__(
        self,
        game: ParityGame,
        cycle: tuple[int, ...],
        mask: tuple[int, ...],
        length: tuple[int, ...],
    ):
        self.game = game
        self._cycle = cycle
        self._mask = mask
        self._length = length
        self._keys: tuple[tuple[int, int, int], ...] | None = None

    def __len__(self) -> int:
        return len(self._cycle)

    def cycle_node(self, v: int) -> int:
        return self._cycle[v]

    def relevant_set(self, v: int) -> frozenset[int]:
        return tables(self.game).nodes_of(self._mask[v])

    def path_length(self, v: int) -> int:
        return self._length[v]

    def __getitem__(self, v: int) -> NodeValuation:
        return NodeValuation(self._cycle[v], self.relevant_set(v), self._length[v])

    def key(self, v: int) -> tuple[int, int, int]:
        """Sort key realizing the node-valuation ordering; larger is better for 0."""
        return self.keys()[v]

    def keys(self) -> tuple[tuple[int, int, int], ...]:
        if self._keys is None:
            t = tables(self.game)
            rew = t.rew
            even, odd = t.even_ranks, t.odd_ranks
            self._keys = tuple(
                (rc, (m & even) | (~m & odd), e if rc < 0 else -e)
                for rc, m, e in zip(
                    (rew[c] for c in self._cycle), self._mask, self._length
                )
            )
        return self._keys

    def as_tuples(self) -> list[tuple[int, frozenset[int], int]]:
        return [(self._cycle[v], self.relevant_set(v), self._length[v]) for v in range(len(self))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameValuation):
            return NotImplemented
        return (
            self._cycle == other._cycle
            and self._mask == other._mask
            and self._length == other._length
        )

    def __hash__(self) -> int:
        return hash((self._cycle, self._mask, self._length))

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{self.game.display(v)}:({self.game.display(self._cycle[v])},"
            f"{{{','.join(sorted(self.game.display(u) for u in self.relevant_set(v)))}}},"
            f"{self._length[v]})"
            for v in range(len(self))
        )
        return f"GameValuation({parts})"


def game_valuation_less(x: GameValuation, y: GameValuation) -> bool:
    """Strict partial order: pointwise no worse everywhere and better somewhere."""
    if len(x) != len(y) or x.game is not y.game and x.game != y.game:
        raise OrderingError("valuations over different node sets are incomparable")
    kx, ky = x.keys(), y.keys()
    return all(a <= b for a, b in zip(kx, ky)) and kx != ky
