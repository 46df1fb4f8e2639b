"""Command-line surface: subcommands, formats, exit codes."""

from __future__ import annotations

import csv

import pytest

from pgsi import generate, serialize
from pgsi.cli import main


def test_generate_writes_family_file(tmp_path):
    out = tmp_path / "g2.pg"
    assert main(["generate", "--n", "2", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("parity 38;\n")
    assert text == serialize(generate(2))


def test_generate_line_count(tmp_path):
    out = tmp_path / "g1.pg"
    assert main(["generate", "--n", "1", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 26  # header + 25 node lines


def test_generate_rejects_bad_n(tmp_path):
    assert main(["generate", "--n", "0", "--out", str(tmp_path / "x")]) == 2


def test_generate_io_failure(tmp_path):
    target = tmp_path / "no" / "such" / "dir" / "x.pg"
    assert main(["generate", "--n", "1", "--out", str(target)]) == 1


def test_solve_family(tmp_path, capsys):
    path = tmp_path / "g2.pg"
    main(["generate", "--n", "2", "--out", str(path)])
    assert main(["solve", str(path)]) == 0
    out = capsys.readouterr().out
    assert "iterations: 43" in out
    assert out.splitlines()[0] == "W0:"  # completely won by player 1


def test_solve_with_oracle_and_trace(tmp_path, capsys):
    path = tmp_path / "g1.pg"
    trace_path = tmp_path / "trace.tsv"
    main(["generate", "--n", "1", "--out", str(path)])
    code = main(["solve", str(path), "--oracle", "--trace", str(trace_path)])
    assert code == 0
    assert "oracle: winners agree" in capsys.readouterr().out
    lines = trace_path.read_text().strip().split("\n")
    assert len(lines) == 17
    assert lines[0].startswith("0\t")
    assert "→" in lines[0]


def test_solve_duplicate_priorities(tmp_path, capsys):
    path = tmp_path / "dup.pg"
    path.write_text("0 3 0 1;\n1 3 1 0;\n")
    assert main(["solve", str(path)]) == 3
    assert "duplicate priorities [3]" in capsys.readouterr().err


def test_solve_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.pg"
    path.write_text("0 2 0 99;\n")
    assert main(["solve", str(path)]) == 3
    assert "dangling" in capsys.readouterr().err


def test_solve_missing_file(tmp_path):
    assert main(["solve", str(tmp_path / "nope.pg")]) == 1


def test_verify_count_only(capsys):
    assert main(["verify", "--n", "1"]) == 0
    assert "iterations: 17 (predicted 17)" in capsys.readouterr().out


def test_verify_trace_small(capsys):
    assert main(["verify", "--n", "2", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "43/43 steps matched" in out


def test_verify_trace_warns_at_n1(capsys):
    assert main(["verify", "--n", "1", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "trace mode needs n >= 2" in out
    assert "iterations: 17" in out


def test_verify_rejects_bad_n():
    assert main(["verify", "--n", "0"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


def test_bench_csv_and_figure(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--n-min", "1", "--n-max", "3", "--csv", str(out)]) == 0
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "nodes", "edges", "iterations", "predicted", "wall_time_ms"]
    assert [int(r[3]) for r in rows[1:]] == [17, 43, 95]
    assert [int(r[4]) for r in rows[1:]] == [17, 43, 95]
    assert all(float(r[5]) >= 0 for r in rows[1:])
    assert (tmp_path / "bench.png").exists()


def test_bench_no_plot(tmp_path):
    out = tmp_path / "bench.csv"
    code = main(
        ["bench", "--n-min", "2", "--n-max", "2", "--csv", str(out), "--no-plot"]
    )
    assert code == 0
    assert not (tmp_path / "bench.png").exists()


def test_bench_rejects_bad_range(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--n-min", "3", "--n-max", "2", "--csv", str(out)]) == 2
    assert main(["bench", "--n-min", "0", "--n-max", "2", "--csv", str(out)]) == 2
