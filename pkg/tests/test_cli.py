import json
import subprocess
import sys
import time

import pytest

from clustergames import experiment
from clustergames.cli import main
from clustergames.circuits import load_circuit
from clustergames.errors import ConfigError, IncompleteInputError
from clustergames.games import build_s_optimal
from clustergames.simulator import Histogram, save_histogram


def test_noiseless_triangle_run():
    result = experiment.run(experiment.RunConfig("triangle", shots=1024, repetitions=3, seed=1))
    assert result.win_probability == 1.0 and result.std_error == 0.0


def test_noiseless_s_optimal_run():
    result = experiment.run(experiment.RunConfig("s_optimal", shots=128, repetitions=2, seed=1))
    assert result.bell_value == 55 and result.win_probability == 1.0


def test_mitigation_beats_raw_readout_preset():
    kw = dict(shots=1024, repetitions=10, noise="readout-only", seed=2024)
    raw = experiment.run(experiment.RunConfig("triangle", mitigation="off", **kw))
    mit = experiment.run(experiment.RunConfig("triangle", mitigation="local", **kw))
    assert mit.win_probability > raw.win_probability


def test_config_validation():
    with pytest.raises(ConfigError):
        experiment.RunConfig("chess")
    with pytest.raises(ConfigError):
        experiment.RunConfig(shots=0)
    cfg = experiment.RunConfig()
    assert cfg.seed is not None and cfg.seed_generated


def test_report_deterministic(tmp_path):
    args = ["run", "--game", "triangle", "--shots", "256", "--reps", "3",
            "--noise", "readout-mild", "--mitigate", "local", "--seed", "77"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--workers", "3"]) == 0
    a = (tmp_path / "a" / "report.json").read_bytes()
    assert a == (tmp_path / "b" / "report.json").read_bytes()
    report = json.loads(a)
    assert report["config"]["seed"] == 77 and report["mitigated"] is True
    assert "created" in json.loads((tmp_path / "a" / "metadata.json").read_text())


def test_run_then_score_round_trip(tmp_path):
    for game, mitigation in (("triangle", "local"), ("s_optimal", "off"), ("s_all", "local")):
        out = tmp_path / game
        cfg = experiment.RunConfig(game, shots=200, repetitions=1, noise="readout-mild",
                                   mitigation=mitigation, seed=5, out=str(out))
        in_process = experiment.run(cfg)
        counts = out / "counts" / "rep000"
        cal = counts if mitigation == "local" else None
        rescored = experiment.score_dir(game, counts, cal)
        assert rescored.win_probability == in_process.win_probability
        assert rescored.per_circuit == in_process.per_circuit


def _write_triangle(root, outcome="000000", shots=1024):
    for coins in ("000", "001", "010", "011", "100", "101", "110", "111"):
        path = root / "triangle" / f"{coins}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        save_histogram(Histogram(6, shots, {outcome: shots}), path)


def test_score_all_zero_counts(tmp_path):
    _write_triangle(tmp_path)
    assert experiment.score_dir("triangle", tmp_path).win_probability == 5 / 8


def test_score_missing_file(tmp_path):
    _write_triangle(tmp_path)
    (tmp_path / "triangle" / "110.json").unlink()
    with pytest.raises(IncompleteInputError):
        experiment.score_dir("triangle", tmp_path)


def test_score_s_optimal_exactly_41(tmp_path):
    spec = build_s_optimal()
    for k, term in enumerate(spec.terms):
        q = term.support[0]
        odd = "".join("1" if i == q else "0" for i in range(1, 7))
        plus, minus = ("000000", odd) if term.sign == 1 else (odd, "000000")
        # 41 terms at +1, 14 at 0 -> S = 41
        counts = {plus: 1000} if k < 41 else {plus: 500, minus: 500}
        path = tmp_path / "bell" / "s_optimal" / f"{term}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        save_histogram(Histogram(6, 1000, counts), path)
    result = experiment.score_dir("s_optimal", tmp_path)
    assert result.bell_value == pytest.approx(41, abs=1e-12)
    assert result.win_probability == pytest.approx(0.8727272727272727, abs=1e-12)


@pytest.mark.parametrize("game,value,threshold", [
    ("triangle", 0.875, 0.875),
    ("s_all", 28, 0.71875),
    ("s_optimal", 19, 0.6727272727272727),
])
def test_bound_command(tmp_path, game, value, threshold):
    start = time.perf_counter()
    assert main(["bound", "--game", game, "--out", str(tmp_path)]) == 0
    assert time.perf_counter() - start < 5
    report = json.loads((tmp_path / f"bound_{game}.json").read_text())
    assert report["lhv_max"] == value
    assert report["classical_threshold"] == pytest.approx(threshold, abs=1e-12)
    for key in ("operator", "quantum_value", "maximizers", "example_assignment"):
        assert key in report


def test_export(tmp_path):
    assert main(["export", "--game", "triangle", "--out", str(tmp_path)]) == 0
    for variant in ("original", "optimized"):
        files = sorted((tmp_path / variant).rglob("*.json"))
        assert len(files) == 12
    assert load_circuit(tmp_path / "optimized" / "triangle" / "011.json").count("H") == 6
    assert load_circuit(tmp_path / "original" / "triangle" / "011.json").count("H") == 12
    assert main(["export", "--game", "s_optimal", "--out", str(tmp_path / "b")]) == 0
    assert len(list((tmp_path / "b" / "original" / "bell").rglob("*.json"))) == 55


def test_error_json_on_stderr(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "clustergames", "score", "--game", "triangle", "--counts", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode != 0
    err = json.loads(proc.stderr)
    assert err["error"] == "incomplete-input"


def test_bad_noise_file(tmp_path):
    bad = tmp_path / "noise.json"
    bad.write_text('{"p1": 0.1}')
    proc = subprocess.run(
        [sys.executable, "-m", "clustergames", "run", "--noise", str(bad), "--seed", "1", "--reps", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and json.loads(proc.stderr)["error"] == "format"
