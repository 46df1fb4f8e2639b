"""Parity game data model, validation, PGSolver-format I/O and random generation.

Games are owner-partitioned directed graphs with integer priorities.  All
objects here are immutable after construction and safe to share between
concurrent solver runs.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class GameError(ValueError):
    """Structurally invalid game data (bad ids, owners, or priorities)."""


class ParseError(GameError):
    """Malformed PGSolver-format input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class NodeRecord:
    """One node: owner (0 or 1), priority, ordered successors, optional label."""

    owner: int
    priority: int
    successors: tuple[int, ...]
    label: str | None = None


class ParityGame:
    """Immutable parity game.

    Nodes are dense integer ids ``0..len(game)-1``.  Successor order is
    preserved exactly as given; it carries no semantics but shows up in
    serialized output and traces.
    """

    __slots__ = (
        "_owners",
        "_priorities",
        "_succs",
        "_labels",
        "_tables_cache",
        "_eval_cache",
    )

    def __init__(self, records: Iterable[NodeRecord | tuple]):
        owners: list[int] = []
        priorities: list[int] = []
        succs: list[tuple[int, ...]] = []
        labels: list[str | None] = []
        for rec in records:
            if not isinstance(rec, NodeRecord):
                rec = NodeRecord(*rec)
            if rec.owner not in (0, 1):
                raise GameError(f"owner must be 0 or 1, got {rec.owner!r}")
            if rec.priority < 0:
                raise GameError(f"negative priority {rec.priority}")
            owners.append(rec.owner)
            priorities.append(int(rec.priority))
            succs.append(tuple(int(u) for u in rec.successors))
            labels.append(rec.label)
        n = len(owners)
        if n == 0:
            raise GameError("a parity game needs at least one node")
        for v, vs in enumerate(succs):
            for u in vs:
                if not 0 <= u < n:
                    raise GameError(f"node {v} has dangling successor {u}")
        self._owners = tuple(owners)
        self._priorities = tuple(priorities)
        self._succs = tuple(succs)
        self._labels = tuple(labels)
        self._tables_cache = None
        self._eval_cache = None

    # -- basic accessors ---------------------------------------------------

    def __len__(self) -> int:
        return len(self._owners)

    def nodes(self) -> range:
        return range(len(self._owners))

    def owner(self, v: int) -> int:
        return self._owners[v]

    def priority(self, v: int) -> int:
        return self._priorities[v]

    def successors(self, v: int) -> tuple[int, ...]:
        return self._succs[v]

    def label(self, v: int) -> str | None:
        return self._labels[v]

    def display(self, v: int) -> str:
        """Label if present, else the decimal id."""
        lab = self._labels[v]
        return lab if lab is not None else str(v)

    @property
    def owners(self) -> tuple[int, ...]:
        return self._owners

    @property
    def priorities(self) -> tuple[int, ...]:
        return self._priorities

    @property
    def all_successors(self) -> tuple[tuple[int, ...], ...]:
        return self._succs

    def edge_count(self) -> int:
        return sum(len(s) for s in self._succs)

    def player_nodes(self, player: int) -> list[int]:
        return [v for v in self.nodes() if self._owners[v] == player]

    def records(self) -> list[NodeRecord]:
        return [
            NodeRecord(o, p, s, lab)
            for o, p, s, lab in zip(
                self._owners, self._priorities, self._succs, self._labels
            )
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParityGame):
            return NotImplemented
        return (
            self._owners == other._owners
            and self._priorities == other._priorities
            and self._succs == other._succs
            and self._labels == other._labels
        )

    def __hash__(self) -> int:
        return hash((self._owners, self._priorities, self._succs))

    def __repr__(self) -> str:
        return f"<ParityGame |V|={len(self)} |E|={self.edge_count()}>"


def reward(game: ParityGame, v: int) -> int:
    """Priority signed by parity: +p for even p, -p for odd."""
    p = game.priority(v)
    return p if p % 2 == 0 else -p


@dataclass(frozen=True)
class ValidationReport:
    """Defects found in a game; empty sets mean the aspect is clean."""

    is_total: bool
    duplicate_priorities: frozenset[int]
    self_loop_nodes: frozenset[int]
    dangling_edges: frozenset[tuple[int, int]]

    @property
    def solver_ready(self) -> bool:
        """Usable by the strategy-improvement solver (self-loops are fine)."""
        return (
            self.is_total
            and not self.duplicate_priorities
            and not self.dangling_edges
        )


def validate(game: ParityGame) -> ValidationReport:
    """Report totality, priority injectivity and self-loops.  Never mutates."""
    seen: dict[int, int] = {}
    duplicates: set[int] = set()
    self_loops: set[int] = set()
    total = True
    for v in game.nodes():
        p = game.priority(v)
        if p in seen:
            duplicates.add(p)
        seen[p] = v
        succ = game.successors(v)
        if not succ:
            total = False
        if v in succ:
            self_loops.add(v)
    return ValidationReport(
        is_total=total,
        duplicate_priorities=frozenset(duplicates),
        self_loop_nodes=frozenset(self_loops),
        dangling_edges=frozenset(),
    )


class Strategy:
    """Immutable positional strategy: one chosen successor per owned node.

    ``player`` names the owner whose nodes form the domain (0 for the
    improvement iteration, 1 for extracted counter-strategies).
    """

    __slots__ = ("_player", "_choice")

    def __init__(self, player: int, choice: tuple[int, ...]):
        self._player = player
        self._choice = choice

    @property
    def player(self) -> int:
        return self._player

    def __getitem__(self, v: int) -> int:
        c = self._choice[v]
        if c < 0:
            raise KeyError(f"node {v} is not owned by player {self._player}")
        return c

    def get(self, v: int) -> int | None:
        c = self._choice[v]
        return None if c < 0 else c

    @property
    def choices(self) -> tuple[int, ...]:
        """Raw per-node choice array; -1 outside the domain."""
        return self._choice

    def as_dict(self) -> dict[int, int]:
        return {v: c for v, c in enumerate(self._choice) if c >= 0}

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self.as_dict().items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Strategy):
            return NotImplemented
        return self._player == other._player and self._choice == other._choice

    def __hash__(self) -> int:
        return hash((self._player, self._choice))

    def __repr__(self) -> str:
        return f"Strategy(player={self._player}, {self.as_dict()!r})"


def make_strategy(
    game: ParityGame, mapping: Mapping[int, int], player: int = 0
) -> Strategy:
    """Build and check a strategy: total on the player's nodes, edge-respecting."""
    choice = [-1] * len(game)
    for v, u in mapping.items():
        if game.owner(v) != player:
            raise GameError(f"node {v} is not owned by player {player}")
        if u not in game.successors(v):
            raise GameError(f"{u} is not a successor of {v}")
        choice[v] = u
    for v in game.nodes():
        if game.owner(v) == player and choice[v] < 0:
            raise GameError(f"strategy misses player-{player} node {v}")
    return Strategy(player, tuple(choice))


def restrict(game: ParityGame, sigma: Strategy) -> ParityGame:
    """Read-only view of the strategy subgame: player-0 edges cut to sigma's picks."""
    if sigma.player != 0:
        raise GameError("restrict expects a player-0 strategy")
    records = []
    for v in game.nodes():
        succ = game.successors(v)
        if game.owner(v) == 0:
            u = sigma[v]
            if u not in succ:
                raise GameError(f"sigma chooses non-successor {u} at node {v}")
            succ = (u,)
        records.append(NodeRecord(game.owner(v), game.priority(v), succ, game.label(v)))
    return ParityGame(records)


# -- PGSolver-style text format -------------------------------------------

_HEADER_RE = re.compile(r"^\s*parity\s+(\d+)\s*;\s*$")
_NODE_RE = re.compile(
    r"^\s*(\d+)\s+(\d+)\s+([01])\s+(\d+(?:\s*,\s*\d+)*)(?:\s+\"([^\"]*)\")?\s*;\s*$"
)


def serialize(game: ParityGame) -> str:
    """Canonical text form: header, then one line per node in ascending id order."""
    out = [f"parity {len(game) - 1};\n"]
    for v in game.nodes():
        line = f"{v} {game.priority(v)} {game.owner(v)} " + ",".join(
            str(u) for u in game.successors(v)
        )
        lab = game.label(v)
        if lab is not None:
            line += f' "{lab}"'
        out.append(line + ";\n")
    return "".join(out)


def parse(text: str) -> ParityGame:
    """Parse PGSolver-format text; header optional on input."""
    rows: dict[int, tuple[int, NodeRecord]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if _HEADER_RE.match(line):
            if rows:
                raise ParseError("header after node lines", lineno)
            continue
        m = _NODE_RE.match(line)
        if not m:
            if re.search(r"-\d", line):
                raise ParseError("negative priority or id", lineno)
            raise ParseError(f"cannot parse node line {line!r}", lineno)
        v = int(m.group(1))
        if v in rows:
            raise ParseError(f"node {v} defined twice", lineno)
        succs = tuple(int(s) for s in re.split(r"\s*,\s*", m.group(4)))
        rows[v] = (
            lineno,
            NodeRecord(int(m.group(3)), int(m.group(2)), succs, m.group(5)),
        )
    if not rows:
        raise ParseError("no node lines found")
    count = max(rows) + 1
    records = []
    for v in range(count):
        if v not in rows:
            raise ParseError(f"node ids not dense: {v} missing")
        records.append(rows[v][1])
    for v, (lineno, rec) in sorted(rows.items()):
        for u in rec.successors:
            if u >= count:
                raise ParseError(f"node {v} has dangling successor {u}", lineno)
    return ParityGame(records)


def random_game(
    node_count: int, out_degree_range: tuple[int, int], seed: int
) -> ParityGame:
    """Seeded random total game with a permutation of 0..n-1 as priorities.

    Self-loops are never generated, so a single-node game is infeasible.
    """
    lo, hi = out_degree_range
    if node_count < 2:
        raise GameError("need at least 2 nodes for a total game without self-loops")
    if not 1 <= lo <= hi <= node_count - 1:
        raise GameError(
            f"out-degree range ({lo}, {hi}) infeasible for {node_count} nodes"
        )
    rng = random.Random(seed)
    priorities = list(range(node_count))
    rng.shuffle(priorities)
    records = []
    for v in range(node_count):
        others = [u for u in range(node_count) if u != v]
        succ = tuple(rng.sample(others, rng.randint(lo, hi)))
        records.append(NodeRecord(rng.randint(0, 1), priorities[v], succ))
    return ParityGame(records)
