"""Parity game solving by discrete strategy improvement.

The package bundles the solver (locally optimizing policy), an exhaustive
valuation oracle, an independent recursive winning-set solver for
cross-checking, and a generator plus trace oracle for the quadratic-size
game family on which the improvement loop takes 13*2^n - 9 iterations.
"""

from .game import (
    GameError,
    NodeRecord,
    ParityGame,
    ParseError,
    Strategy,
    ValidationReport,
    make_strategy,
    parse,
    random_game,
    restrict,
    reward,
    serialize,
    validate,
)
from .improvement import (
    IterationResult,
    extract_counter_strategy,
    extract_winners,
    format_trace,
    improve_locally,
    initial_strategy,
    run,
)
from .lowerbound import (
    BitState,
    bit_pattern,
    counter_walk,
    expected_counts,
    expected_iterations,
    expected_trace,
    generate,
    macro_state,
    node_ids,
    sigma_count,
    sigma_final,
    sigma_init,
    verify_count,
    verify_lemma7,
)
from .orderings import (
    GameValuation,
    NodeValuation,
    OrderingError,
    game_valuation_less,
    relevance_less,
    reward_less,
    set_less,
    valuation_less,
)
from .valuation import (
    EnumerationGuardError,
    ImprovementArena,
    LooplessPath,
    ValuationError,
    dominating_cycle_nodes,
    evaluate,
    evaluate_bruteforce,
    improvement_arena,
    is_improvable,
    path_valuation,
)
from .zielonka import WinningSets, attractor, zielonka_solve

__version__ = "0.1.0"

__all__ = [
    "BitState",
    "EnumerationGuardError",
    "GameError",
    "GameValuation",
    "ImprovementArena",
    "IterationResult",
    "LooplessPath",
    "NodeRecord",
    "NodeValuation",
    "OrderingError",
    "ParityGame",
    "ParseError",
    "Strategy",
    "ValidationReport",
    "ValuationError",
    "WinningSets",
    "attractor",
    "bit_pattern",
    "counter_walk",
    "dominating_cycle_nodes",
    "evaluate",
    "evaluate_bruteforce",
    "expected_counts",
    "expected_iterations",
    "expected_trace",
    "extract_counter_strategy",
    "extract_winners",
    "format_trace",
    "game_valuation_less",
    "generate",
    "improve_locally",
    "improvement_arena",
    "initial_strategy",
    "is_improvable",
    "macro_state",
    "make_strategy",
    "node_ids",
    "parse",
    "path_valuation",
    "random_game",
    "relevance_less",
    "restrict",
    "reward",
    "reward_less",
    "run",
    "serialize",
    "set_less",
    "sigma_count",
    "sigma_final",
    "sigma_init",
    "valuation_less",
    "validate",
    "verify_count",
    "verify_lemma7",
    "zielonka_solve",
]
