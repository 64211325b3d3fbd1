"""End-to-end checks of the command-line front end.

The binary path arrives via the GOTCHA_CLI environment variable, set by the
test harness to the freshly built executable.
"""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("GOTCHA_CLI", "gotcha")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_version():
    r = run("version")
    assert r.returncode == 0
    assert r.stdout.strip() == "gotcha 0.1.0"


def test_help_exits_clean():
    assert run("--help").returncode == 0
    assert run("session", "--help").returncode == 0


def test_unknown_subcommand_is_a_usage_error():
    assert run("frobnicate").returncode == 2


def test_missing_catalog_path_names_the_file(tmp_path):
    r = run("--catalog", "/no/such/catalog.json", "session", "--out", str(tmp_path))
    assert r.returncode == 2
    assert "/no/such/catalog.json" in r.stderr


def test_session_outputs_and_replay(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    for out in (out1, out2):
        r = run("--seed", "9", "--out", str(out), "session", "--profile", "ldfl")
        assert r.returncode == 0, r.stderr
    js1 = (out1 / "session-ldfl.json").read_bytes()
    js2 = (out2 / "session-ldfl.json").read_bytes()
    assert js1 == js2

    record = json.loads(js1)
    assert record["verdict"] == "fail"
    assert record["score_mode"] == "confidence-positive"

    csv = (out1 / "session-ldfl.csv").read_text()
    assert csv.splitlines()[0] == ("participant_id,step_index,challenge_id,retry_index,"
                                   "verified,q_bar,p,increment,E,E_bar,verdict")

    manifest = json.loads((out1 / "manifest.json").read_text())
    assert manifest["command"] == "session"
    assert manifest["seed"] == 9


def test_montecarlo_report(tmp_path):
    r = run("--seed", "3", "--out", str(tmp_path), "montecarlo",
            "--n-genuine", "6", "--n-per-pipeline", "6")
    assert r.returncode == 0, r.stderr
    report = json.loads((tmp_path / "report.json").read_text())
    names = [p["pipeline"] for p in report["pipelines"]]
    assert names == ["genuine", "ldfl", "hdfl", "fsgan", "lia"]
    assert (tmp_path / "trajectories.csv").read_text().startswith("pipeline,k,mean_E,std_E")
    assert (tmp_path / "roc.csv").read_text().startswith("threshold,fpr,tpr")
    assert 0.0 <= report["fpr"] <= 1.0
    assert 0.0 <= report["fnr"] <= 1.0


def test_qualify_beta_monotonicity(tmp_path):
    sets = {}
    for beta in ("0.1", "0.35"):
        out = tmp_path / beta
        r = run("--seed", "5", "--out", str(out), "qualify", "--beta", beta)
        assert r.returncode == 0, r.stderr
        doc = json.loads((out / "qualification.json").read_text())
        sets[beta] = set(doc["qualified"])
        assert doc["beta"] == float(beta)
    assert sets["0.35"] <= sets["0.1"]


def test_qualify_rejects_out_of_range_beta(tmp_path):
    assert run("--out", str(tmp_path), "qualify", "--beta", "2").returncode == 2


def test_calibrate_meets_fp_budget(tmp_path):
    r = run("--seed", "12", "--out", str(tmp_path), "calibrate",
            "--fp-rate", "0.05", "--n", "60")
    assert r.returncode == 0, r.stderr
    doc = json.loads((tmp_path / "calibration.json").read_text())
    assert doc["fp_rate"] == 0.05
    assert doc["threshold"] > 0.0
    assert 0.0 <= doc["validation"]["fpr"] <= 0.25
    assert doc["validation"]["fnr"] <= 0.10


def test_invalid_fp_rate_is_a_usage_error(tmp_path):
    assert run("--out", str(tmp_path), "calibrate", "--fp-rate", "1.5").returncode == 2
