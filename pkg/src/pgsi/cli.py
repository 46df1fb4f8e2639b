"""Command-line surface: generate, solve, verify and bench.

Exit codes: 0 success, 1 verification/benchmark failure or I/O error,
2 usage error, 3 input validation failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from .game import GameError, ParseError, parse, serialize, validate
from .improvement import format_trace, improve_locally, run
from .lowerbound import (
    expected_iterations,
    generate,
    verify_lemma7,
)
from .zielonka import zielonka_solve

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INVALID = 3


def _cmd_generate(args) -> int:
    if args.n < 1:
        print("error: --n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    text = serialize(generate(args.n))
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_solve(args) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        game = parse(text)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = validate(game)
    if not report.solver_ready:
        if report.duplicate_priorities:
            print(
                "error: duplicate priorities "
                f"{sorted(report.duplicate_priorities)}",
                file=sys.stderr,
            )
        if not report.is_total:
            print("error: game is not total", file=sys.stderr)
        return EXIT_INVALID
    result = run(game, improve_locally, record_trace=args.trace is not None)
    if args.trace is not None:
        try:
            Path(args.trace).write_text(format_trace(game, result.trace))
        except OSError as exc:
            print(f"error: cannot write {args.trace}: {exc}", file=sys.stderr)
            return EXIT_FAIL
    for name, side in (("W0", result.w0), ("W1", result.w1)):
        print(f"{name}: {' '.join(game.display(v) for v in sorted(side))}".rstrip())
    print(f"iterations: {result.iteration_count}")
    if args.oracle:
        wins = zielonka_solve(game)
        if wins.w0 != result.w0 or wins.w1 != result.w1:
            print("error: winner mismatch against the recursive oracle", file=sys.stderr)
            return EXIT_FAIL
        print("oracle: winners agree")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.n < 1:
        print("error: --n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.trace and args.n < 2:
        print("warning: trace mode needs n >= 2; checking the count only")
    if args.trace and args.n >= 2:
        report = verify_lemma7(args.n)
        if report.first_divergence is not None:
            idx, desc = report.first_divergence
            print(f"first divergent step: {idx} ({desc})")
            print(f"{report.matched}/{report.expected_iterations} steps matched")
            return EXIT_FAIL
        print(f"{report.matched}/{report.expected_iterations} steps matched")
        if not report.count_ok:
            print(
                f"iteration count {report.iterations} != predicted "
                f"{report.expected_iterations}"
            )
            return EXIT_FAIL
        print(f"iterations: {report.iterations} (predicted {report.expected_iterations})")
        return EXIT_OK
    result = run(generate(args.n))
    predicted = expected_iterations(args.n)
    print(f"iterations: {result.iteration_count} (predicted {predicted})")
    if result.iteration_count != predicted:
        print("iteration count off the closed form", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _plot_bench(rows: list[dict], png_path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [r["n"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.semilogy(ns, [r["iterations"] for r in rows], "o-", label="measured")
    ax1.semilogy(ns, [r["predicted"] for r in rows], "x--", label="13*2^n-9")
    ax1.set_xlabel("n")
    ax1.set_ylabel("iterations")
    ax1.legend()
    ax1.grid(True, which="both", alpha=0.3)
    ax2.semilogy(ns, [max(r["wall_time_ms"], 1e-3) for r in rows], "o-")
    ax2.set_xlabel("n")
    ax2.set_ylabel("wall time [ms]")
    ax2.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def _cmd_bench(args) -> int:
    if not 1 <= args.n_min <= args.n_max:
        print("error: need 1 <= --n-min <= --n-max", file=sys.stderr)
        return EXIT_USAGE
    rows: list[dict] = []
    csv_path = Path(args.csv)
    try:
        handle = csv_path.open("w", newline="")
    except OSError as exc:
        print(f"error: cannot write {args.csv}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    with handle:
        writer = csv.writer(handle)
        writer.writerow(["n", "nodes", "edges", "iterations", "predicted", "wall_time_ms"])
        for n in range(args.n_min, args.n_max + 1):
            game = generate(n)
            start = time.perf_counter()
            result = run(game)
            wall_ms = (time.perf_counter() - start) * 1000.0
            predicted = expected_iterations(n)
            row = {
                "n": n,
                "nodes": len(game),
                "edges": game.edge_count(),
                "iterations": result.iteration_count,
                "predicted": predicted,
                "wall_time_ms": wall_ms,
            }
            if result.iteration_count != predicted:
                print(
                    f"error: n={n}: {result.iteration_count} iterations, "
                    f"predicted {predicted}",
                    file=sys.stderr,
                )
                return EXIT_FAIL
            writer.writerow(
                [n, row["nodes"], row["edges"], row["iterations"], predicted,
                 f"{wall_ms:.3f}"]
            )
            handle.flush()
            rows.append(row)
    if not args.no_plot:
        png_path = csv_path.with_suffix(".png")
        try:
            _plot_bench(rows, png_path)
            print(f"wrote {csv_path} and {png_path}")
        except OSError as exc:
            print(f"error: cannot write figure: {exc}", file=sys.stderr)
            return EXIT_FAIL
    else:
        print(f"wrote {csv_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgsi",
        description="Parity game solving by discrete strategy improvement, "
        "with the exponential lower-bound family as a built-in benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a lower-bound game to a file")
    p_gen.add_argument("--n", type=int, required=True, help="family parameter (>= 1)")
    p_gen.add_argument("--out", required=True, help="output path (PGSolver format)")
    p_gen.set_defaults(func=_cmd_generate)

    p_solve = sub.add_parser("solve", help="solve a game file by strategy iteration")
    p_solve.add_argument("path", help="game file (PGSolver format)")
    p_solve.add_argument("--trace", help="write the improvement trace to this path")
    p_solve.add_argument(
        "--oracle", action="store_true",
        help="cross-check winners against the recursive oracle",
    )
    p_solve.set_defaults(func=_cmd_solve)

    p_verify = sub.add_parser(
        "verify", help="check the run on the lower-bound family against prediction"
    )
    p_verify.add_argument("--n", type=int, required=True)
    p_verify.add_argument(
        "--trace", action="store_true",
        help="also match the full strategy trace (needs n >= 2)",
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_bench = sub.add_parser("bench", help="benchmark the family, CSV + figure out")
    p_bench.add_argument("--n-min", type=int, default=1)
    p_bench.add_argument("--n-max", type=int, required=True)
    p_bench.add_argument("--csv", required=True, help="output CSV path")
    p_bench.add_argument(
        "--no-plot", action="store_true", help="skip the rendered figure"
    )
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
