import csv
import io

import pytest

from polybimatroid import cli, experiments
from polybimatroid.cli import EXIT_INFEASIBLE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from polybimatroid.verify import Violation

WORKED = ["solve", "--data", "table1", "--s1", "1,3", "--s2", "2", "--b1p", "1", "--b2p", "1", "--w", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--n", "5", "10", "20")
    assert code == EXIT_OK
    assert out.splitlines() == ["n,b1,b2,b1p,b2p,w", "5,2,2,1,1,2", "10,4,5,3,3,5", "20,8,10,6,6,10"]


def test_params_small_n(capsys):
    code, _, err = run(capsys, "params", "--n", "2")
    assert code == EXIT_USAGE and "n >= 3" in err


def test_solve_worked(capsys):
    code, out, _ = run(capsys, *WORKED, "--verify")
    assert code == EXIT_OK
    lines = dict(l.split(None, 1) for l in out.splitlines())
    assert float(lines["value"]) == pytest.approx(1.378783, abs=1e-6)
    assert lines["incumbent"].strip() == "({2},{3})"
    assert "brute force 1.378783" in out


def test_solve_csv(capsys):
    code, out, _ = run(capsys, *WORKED, "--format", "csv")
    (row,) = csv.DictReader(io.StringIO(out))
    assert code == EXIT_OK
    assert (row["n"], row["t"], row["cuts"]) == ("3", "7", "6")
    assert float(row["value"]) == pytest.approx(1.378783, abs=1e-6)


def test_solve_generated(capsys):
    code, out, _ = run(capsys, "solve", "--n", "6", "--t", "20", "--seed", "4", "--verify")
    assert code == EXIT_OK and "value" in out


def test_solve_infeasible(capsys):
    code, _, err = run(capsys, "solve", "--data", "table1", "--s1", "1", "--s2", "2", "--b1p", "2", "--b2p", "1", "--w", "0")
    assert code == EXIT_INFEASIBLE and "infeasible" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["solve", "--data", "table1"],
        ["solve", "--data", "table1", "--s1", "1,x"],
        ["solve", "--data", "table1", "--s1", "9", "--b1p", "0", "--b2p", "0", "--w", "0"],
        ["solve", "--data", "table1", "--s1", "1"],
        ["solve", "--data", "/nonexistent/readings.csv", "--n", "3", "--t", "2"],
        ["solve", "--data", "table1", "--n", "5", "--t", "3"],
        ["bench", "--n", "5", "--reps", "x"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_bad_csv_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("location,timestep,temperature,humidity\n1,1,20.5,40\n1,2,warm,41\n")
    code, _, err = run(capsys, "solve", "--data", str(p), "--n", "1", "--t", "1")
    assert code == EXIT_USAGE and "line 3" in err


def test_bench_text_and_out(capsys, tmp_path):
    out_file = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "bench", "--n", "5", "--t", "10", "100", "--reps", "3", "--verify", "--out", str(out_file))
    assert code == EXIT_OK
    header, cell1, cell2 = out.splitlines()[:3]
    assert header.split() == ["n", "t", "time", "(s)", "#", "cuts", "#", "nodes"]
    assert cell1.split()[:2] == ["5", "10"] and cell2.split()[:2] == ["5", "100"]
    rows = list(csv.DictReader(out_file.open()))
    assert len(rows) == 6


def test_bench_csv_deterministic(capsys):
    argv = ("bench", "--n", "5", "--t", "10", "--reps", "2", "--seed", "9", "--format", "csv")
    strip = lambda text: [{k: v for k, v in r.items() if k != "time_s"} for r in csv.DictReader(io.StringIO(text))]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert strip(a) == strip(b)


def test_bench_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr(experiments, "brute_force_min", lambda oracle, feasible=None: (None, -1.0))
    code, out, err = run(capsys, "bench", "--n", "5", "--t", "10", "--reps", "1", "--verify")
    assert code == EXIT_MISMATCH and "MISMATCH" in out and "mismatch" in err


def test_solve_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr(experiments, "brute_force_min", lambda oracle, feasible=None: (None, -1.0))
    code, _, err = run(capsys, *WORKED, "--verify")
    assert code == EXIT_MISMATCH and "mismatch" in err


def test_bench_insufficient_data(capsys):
    code, out, err = run(capsys, "bench", "--data", "table1", "--n", "5", "--t", "3", "--reps", "2")
    assert code == EXIT_USAGE and "FAILED" in out and "2 instance(s) failed" in err


def test_check_table1(capsys):
    code, out, _ = run(capsys, "check", "--data", "table1")
    assert code == EXIT_OK
    assert "ando   ok" in out and "direct ok" in out


def test_check_subsamples_large_file(capsys):
    code, out, _ = run(capsys, "check", "--n", "4", "--t", "30", "--seed", "1")
    assert code == EXIT_OK and "30 timesteps" in out


def test_check_violation_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli, "check_ando", lambda oracle: Violation("A2", ("x", 0), -2.0, 0.0))
    code, out, _ = run(capsys, "check", "--data", "table1")
    assert code == EXIT_MISMATCH and "violated (A2)" in out


def test_check_rejects_large_n(capsys):
    code, _, err = run(capsys, "check", "--n", "9")
    assert code == EXIT_USAGE and "n <= 8" in err
