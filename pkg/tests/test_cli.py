"""Command-line front end."""
import csv
import re
import subprocess
import sys

import numpy as np
import pytest

from spiked_wishart import cli
from spiked_wishart.exact import ExactPdfParams, pdf_kappa_sq
from spiked_wishart.verification import CheckResult


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_pdf_curve(tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["pdf", "--n", "3", "--alpha", "2", "--eta", "10", "--grid", "3:40:200", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["z", "value"]
    assert len(rows) == 200
    vals = np.array([float(r[1]) for r in rows])
    assert np.all(vals >= 0)
    assert rows[0] == ["3", "0"]
    z = float(rows[57][0])
    assert vals[57] == pdf_kappa_sq(z, ExactPdfParams.of(3, 2, 10.0))


def test_seventeen_digits_round_trip(tmp_path):
    out = tmp_path / "m.csv"
    cli.main(["min-eig-cdf", "--n", "3", "--alpha", "1", "--eta", "5", "--grid", "0.01:2:7", "--out", str(out)])
    _, rows = read_csv(out)
    for x, v in rows:
        assert float(format(float(v), ".17g")) == float(v)
        assert "," not in v and "," not in x


def test_stdout(capsys):
    assert cli.main(["asym-cdf", "--alpha", "1", "--grid", "0.5:2:3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "v,value"
    assert len(lines) == 4


def test_log_grid(tmp_path):
    out = tmp_path / "a.csv"
    cli.main(["asym-pdf", "--alpha", "2", "--grid", "0.01:100:5", "--log-grid", "--out", str(out)])
    _, rows = read_csv(out)
    np.testing.assert_allclose([float(r[0]) for r in rows], [0.01, 0.1, 1, 10, 100], rtol=1e-12)


def test_sample_twice_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sample", "--n", "3", "--alpha", "2", "--eta", "10", "--trials", "1000", "--seed", "7"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b), "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, rows = read_csv(a)
    assert header == ["trial", "kappa_sq", "lambda_min"]
    assert len(rows) == 1000


@pytest.mark.parametrize(
    "cmd",
    [
        ["cdf", "--n", "2", "--alpha", "1", "--eta", "2", "--grid", "2:30:6"],
        ["min-eig-pdf", "--n", "4", "--alpha", "2", "--eta", "3", "--grid", "0:2:9"],
        ["mgf", "--n", "2", "--alpha", "1", "--eta", "2", "--grid", "0:0.5:3"],
    ],
)
def test_curves_deterministic(tmp_path, cmd):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(cmd + ["--out", str(a)]) == 0
    assert cli.main(cmd + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_mgf_starts_at_one(tmp_path):
    out = tmp_path / "g.csv"
    cli.main(["mgf", "--n", "2", "--alpha", "1", "--eta", "2", "--grid", "0:0.5:3", "--out", str(out)])
    _, rows = read_csv(out)
    assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-6)


def test_figure_writes_pairs(tmp_path):
    assert cli.main(["figure", "4", "--trials", "200", "--seed", "3", "--out", str(tmp_path)]) == 0
    for name in ("analytic", "empirical"):
        header, rows = read_csv(tmp_path / f"fig4_{name}.csv")
        assert header == ["series", "v", "cdf"]
        assert rows


@pytest.mark.parametrize(
    "argv",
    [
        ["pdf", "--bogus"],
        ["pdf", "--grid", "5:3:10"],
        ["pdf", "--grid", "3:5:1"],
        ["pdf", "--grid", "nonsense"],
        ["sample", "--trials", "0"],
        ["figure", "9"],
        ["launch"],
        ["mgf", "--tol", "-1", "--grid", "0:1:2"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    assert capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["pdf", "--n", "1", "--grid", "1:3:3"],
        ["pdf", "--n", "3"],
        ["asym-cdf", "--alpha", "1", "--grid", "0:1:3", "--log-grid"],
        ["mgf", "--grid=-1:1:3"],
        ["pdf", "--eta", "-2", "--grid", "3:4:2"],
    ],
)
def test_semantic_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_verify_subset_passes(capsys):
    assert cli.main(["verify", "--tol", "default", "--only", "3,7"]) == 0
    out = capsys.readouterr().out
    assert re.search(r"\[PASS\] criterion +3 ", out)
    assert re.search(r"\[PASS\] criterion +7 ", out)


def test_verify_failure_exit_1(monkeypatch, capsys):
    import spiked_wishart.verification as v

    fake = [CheckResult(1, "x", True, "ok", 0.0), CheckResult(2, "y", False, "bad", 0.0)]

    def run_acceptance(only=None, threads=None, report=None):
        for r in fake:
            report(r)
        return fake

    monkeypatch.setattr(v, "run_acceptance", run_acceptance)
    assert cli.main(["verify"]) == 1
    assert re.search(r"\[FAIL\] criterion +2 ", capsys.readouterr().out)


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "spiked_wishart", "asym-cdf", "--alpha", "0", "--grid", "1:2:2"],
        capture_output=True, text=True, check=True,
    )
    assert r.stdout.splitlines()[0] == "v,value"
