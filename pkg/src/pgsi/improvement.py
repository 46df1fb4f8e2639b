"""The strategy-iteration driver and the locally optimizing policy.

The driver keeps improving player 0's strategy until no single edge switch
pays off, then reads the winning sets and player 1's counter-strategy off
the final valuation.  ``iteration_count`` is the number of strategies the
loop evaluates, initial strategy included; on the generated lower-bound
family this equals the closed-form prediction exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

from .game import GameError, ParityGame, Strategy, reward, validate
from .orderings import GameValuation, tables
from .valuation import evaluate, is_improvable


class ImprovementPolicy(Protocol):
    """Rule turning the current strategy and its valuation into the next one.

    Implementations must pick arena edges only and must change the valuation
    whenever the strategy is improvable.
    """

    def __call__(
        self, game: ParityGame, sigma: Strategy, valuation: GameValuation
    ) -> Strategy: ...


@dataclass(frozen=True)
class IterationResult:
    """Outcome of a strategy-iteration run."""

    w0: frozenset[int]
    w1: frozenset[int]
    sigma_final: Strategy
    tau: Strategy
    iteration_count: int
    trace: tuple[tuple[Strategy, GameValuation], ...] | None = None


def initial_strategy(game: ParityGame) -> Strategy:
    """Send every player-0 node to its reward-maximal successor."""
    choice = [-1] * len(game)
    for v in game.nodes():
        if game.owner(v) == 0:
            choice[v] = max(game.successors(v), key=lambda u: reward(game, u))
    return Strategy(0, tuple(choice))


def _improve_step(
    game: ParityGame, sigma: Strategy, valuation: GameValuation
) -> tuple[Strategy, bool]:
    """One locally optimizing step plus the effective-improvability verdict.

    A node that is its own region's cycle top has a valuation-irrelevant
    outgoing edge (no path to it passes through it), so a switch there can
    never move the game valuation; such nodes do not keep the loop alive.
    """
    keys = valuation.keys()
    rew = tables(game).rew
    choices = sigma.choices
    choice = [-1] * len(game)
    improved = False
    for v, old in enumerate(choices):
        if old < 0:
            continue
        best = old
        bk = keys[old]
        br = rew[old]
        base = bk
        for u in game.successors(v):
            ku = keys[u]
            if ku > bk or (ku == bk and rew[u] > br):
                best, bk, br = u, ku, rew[u]
        if bk > base and valuation.cycle_node(v) != v:
            improved = True
        choice[v] = best
    return Strategy(0, tuple(choice)), improved


def _effectively_improvable(
    game: ParityGame, sigma: Strategy, valuation: GameValuation
) -> bool:
    """Strict improvement available at some node that can actually move Xi."""
    keys = valuation.keys()
    owners = game.owners
    choices = sigma.choices
    for v in game.nodes():
        if owners[v] != 0 or valuation.cycle_node(v) == v:
            continue
        base = keys[choices[v]]
        for u in game.successors(v):
            if keys[u] > base:
                return True
    return False


def improve_locally(
    game: ParityGame, sigma: Strategy, valuation: GameValuation
) -> Strategy:
    """Locally optimizing policy: per node the valuation-maximal successor,
    ties broken by node reward."""
    keys = valuation.keys()
    t = tables(game)
    rew = t.rew
    owners = game.owners
    choice = [-1] * len(game)
    for v in game.nodes():
        if owners[v] != 0:
            continue
        best = None
        best_key = None
        for u in game.successors(v):
            k = (keys[u], rew[u])
            if best_key is None or k > best_key:
                best_key = k
                best = u
        choice[v] = best
    return Strategy(0, tuple(choice))


def extract_winners(
    game: ParityGame, valuation: GameValuation
) -> tuple[frozenset[int], frozenset[int]]:
    """Winning sets of a non-improvable strategy's valuation.

    Player 0 keeps exactly the nodes whose cycle node has non-negative
    reward.
    """
    w0 = []
    w1 = []
    for v in game.nodes():
        if reward(game, valuation.cycle_node(v)) >= 0:
            w0.append(v)
        else:
            w1.append(v)
    return frozenset(w0), frozenset(w1)


def extract_counter_strategy(game: ParityGame, valuation: GameValuation) -> Strategy:
    """Player 1's optimal reply: valuation-minimal successor, ties broken by
    reward-minimal node."""
    keys = valuation.keys()
    t = tables(game)
    rew = t.rew
    choice = [-1] * len(game)
    for v in game.nodes():
        if game.owner(v) != 1:
            continue
        best = None
        best_key = None
        for u in game.successors(v):
            k = (keys[u], rew[u])
            if best_key is None or k < best_key:
                best_key = k
                best = u
        choice[v] = best
    return Strategy(1, tuple(choice))


def run(
    game: ParityGame,
    policy: ImprovementPolicy | Callable = improve_locally,
    record_trace: bool = False,
    max_iterations: int | None = None,
) -> IterationResult:
    """Iterate the policy from the initial strategy to the fixpoint.

    ``iteration_count`` counts the strategies evaluated by the loop (the
    final, non-improvable one included).  With ``record_trace`` every
    evaluated ``(strategy, valuation)`` pair is retained in order.
    """
    report = validate(game)
    if not report.solver_ready:
        raise GameError(
            "game not solvable by strategy iteration: "
            + ("non-total; " if not report.is_total else "")
            + (
                f"duplicate priorities {sorted(report.duplicate_priorities)}"
                if report.duplicate_priorities
                else ""
            )
        )
    sigma = initial_strategy(game)
    trace: list[tuple[Strategy, GameValuation]] = []
    count = 0
    fused = policy is improve_locally
    prev_keys = None
    while True:
        valuation = evaluate(game, sigma)
        keys = valuation.keys()
        if prev_keys is not None:
            # strictly increasing valuations also guarantee termination
            if not (
                all(a <= b for a, b in zip(prev_keys, keys)) and prev_keys != keys
            ):
                raise RuntimeError("improvement step did not increase the valuation")
        prev_keys = keys
        count += 1
        if record_trace:
            trace.append((sigma, valuation))
        if fused:
            nxt, improvable = _improve_step(game, sigma, valuation)
        else:
            improvable = _effectively_improvable(game, sigma, valuation)
        if not improvable:
            break
        if max_iterations is not None and count >= max_iterations:
            raise RuntimeError(f"no fixpoint within {max_iterations} iterations")
        sigma = nxt if fused else policy(game, sigma, valuation)
    w0, w1 = extract_winners(game, valuation)
    tau = extract_counter_strategy(game, valuation)
    return IterationResult(
        w0=w0,
        w1=w1,
        sigma_final=sigma,
        tau=tau,
        iteration_count=count,
        trace=tuple(trace) if record_trace else None,
    )


def format_trace(game: ParityGame, trace) -> str:
    """One line per evaluated strategy: index, then each player-0 decision
    as ``v→w`` in ascending node order, tab-separated."""
    lines = []
    p0 = game.player_nodes(0)
    for i, entry in enumerate(trace):
        sigma = entry[0] if isinstance(entry, tuple) else entry
        cells = [f"{game.display(v)}→{game.display(sigma[v])}" for v in p0]
        lines.append("\t".join([str(i)] + cells))
    return "\n".join(lines) + "\n"
