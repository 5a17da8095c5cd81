"""CLI suites, JSON reports, CSV emission, exit codes."""

import json
import subprocess
import sys
from fractions import Fraction as Q

import pytest

from gjms6.cli import main
from gjms6.report import CheckReport, emit_csv


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "gjms6.cli", *args],
        capture_output=True, text=True, timeout=600,
    )


def test_dtn_suite_json(tmp_path):
    out = tmp_path / "report.json"
    code = main(["dtn", "--geometry", "ball", "--n", "7", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"version", "config", "checks", "summary"}
    assert doc["summary"]["fail"] == 0
    assert doc["config"]["suite"] == "dtn"
    rec = doc["checks"][0]
    assert set(rec) == {"id", "tag", "status", "residual", "tolerance", "exact", "runtime_ms"}
    # exact residuals serialize as rationals
    assert any(c["residual"] == "0/1" for c in doc["checks"])


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["dtn", "--geometry", "hyperbolic", "--n", "8", "--out", str(a)]) == 0
    assert main(["dtn", "--geometry", "hyperbolic", "--n", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_covariance_suite_small():
    import gjms6.cli as cli

    report = CheckReport("covariance", {})
    cli.run_covariance(report, 7, seed=5, probes=2)
    assert report.ok and report.n_pass > 0


def test_config_errors():
    assert main(["all", "--n", "4"]) == 2
    assert main(["critical", "--n", "7"]) == 2
    assert main(["trace", "--n", "5"]) == 2
    assert main(["trace", "--geometry", "hyperbolic", "--n", "7"]) == 2


def test_multiplier_table_csv(tmp_path):
    out = tmp_path / "mult.csv"
    code = main(["dtn", "--geometry", "ball", "--n", "7",
                 "--csv", f"multiplier_table:{out}"])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "ell,multiplier"
    vals = [line.split(",")[1] for line in lines[1:4]]
    assert vals == ["120", "720", "2520"]


def test_missing_series_errors():
    report = CheckReport("dtn", {})
    with pytest.raises(KeyError):
        emit_csv(report, "gap_vs_epsilon", "/tmp/never.csv")


def test_entrypoint_exit_status():
    r = run_cli(["dtn", "--geometry", "halfspace", "--n", "7"])
    assert r.returncode == 0
    assert "summary:" in r.stdout
