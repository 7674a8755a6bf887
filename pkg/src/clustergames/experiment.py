"""End-to-end experiments: build, sample, mitigate, score, report.

One repetition runs the four calibration circuits and every game circuit,
optionally mitigates, and scores. Seeds: repetition ``r`` gets a seed derived
from ``(master seed, r)``, and each circuit's stream inside a repetition is
keyed by its label (see :mod:`clustergames.simulator`).
"""

from __future__ import annotations

import json
import secrets
from datetime import datetime, timezone
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from . import circuits as C
from .errors import ConfigError, IncompleteInputError, NotInvertibleError
from .games import (
    BellGameSpec,
    GameResult,
    bell_spec,
    combine_repetitions,
    score_bell,
    score_triangle,
    triangle_spec,
)
from .lhv import LhvBound, max_lhv_bell, max_lhv_terms, max_lhv_triangle
from .mitigation import calibrate, load_calibration_dir, mitigate
from .simulator import (
    Histogram,
    NoiseModel,
    load_histogram,
    load_noise_model,
    load_preset,
    sample,
    save_histogram,
)

GAMES = ("triangle", "s_all", "s_optimal")


@dataclass
class RunConfig:
    game: str = "triangle"
    shots: int = 1024
    repetitions: int = 10
    noise: str | None = None  # preset name, JSON path, or None for noiseless
    mitigation: str = "off"
    seed: int | None = None
    out: str | None = None
    optimize: bool = True
    workers: int = 1
    seed_generated: bool = field(default=False, init=False)

    def __post_init__(self):
        if self.game not in GAMES:
            raise ConfigError(f"unknown game {self.game!r}; choose from {GAMES}")
        if self.shots < 1 or self.repetitions < 1:
            raise ConfigError("shots and repetitions must be positive")
        if self.mitigation not in ("off", "local"):
            raise ConfigError(f"mitigation must be 'off' or 'local', got {self.mitigation!r}")
        if self.seed is None:
            self.seed = secrets.randbits(63)
            self.seed_generated = True

    def noise_model(self) -> NoiseModel | None:
        if self.noise in (None, "", "none", "ideal"):
            return None
        if Path(self.noise).is_file():
            return load_noise_model(self.noise)
        return load_preset(self.noise)


def repetition_seed(master: int, rep: int) -> int:
    return int(np.random.SeedSequence(entropy=master, spawn_key=(rep,)).generate_state(1, np.uint64)[0])


def game_circuits(game: str, optimized: bool = True) -> dict[str, C.Circuit]:
    """Game circuits keyed by label."""
    if game == "triangle":
        built = C.build_triangle_circuits()
    else:
        built = C.build_bell_circuits(bell_spec(game))
    out = {c.label: c for c in built.values()}
    return {k: C.optimize(c) for k, c in out.items()} if optimized else out


def calibration_circuits() -> dict[str, C.Circuit]:
    return {c.label: c for c in C.build_calibration_circuits().values()}


def score_histograms(
    game: str,
    counts: Mapping[str, Histogram],
    calibration: Mapping[str, Histogram] | None = None,
) -> GameResult:
    """Score label-keyed histograms; with calibration data, mitigate locally first."""
    dists: dict = dict(counts)
    mitigated = calibration is not None
    if mitigated:
        try:
            _, inverses = calibrate(calibration)
        except NotInvertibleError as exc:
            raise NotInvertibleError(f"calibration failed: {exc}") from exc
        dists = {label: mitigate(h, inverses) for label, h in counts.items()}
    if game == "triangle":
        keyed = {label.split("/", 1)[1]: d for label, d in dists.items() if label.startswith("triangle/")}
        result = score_triangle(keyed, triangle_spec())
    else:
        spec = bell_spec(game)
        prefix = f"bell/{spec.label}/"
        keyed = {label[len(prefix):]: d for label, d in dists.items() if label.startswith(prefix)}
        result = score_bell(keyed, spec)
    result.mitigated = mitigated
    return result


def run_repetition(cfg: RunConfig, rep: int, noise: NoiseModel | None) -> tuple[GameResult, dict[str, Histogram]]:
    seed = repetition_seed(cfg.seed, rep)
    todo = dict(game_circuits(cfg.game, cfg.optimize))
    todo.update(calibration_circuits())
    counts = {label: sample(c, cfg.shots, noise, seed) for label, c in sorted(todo.items())}
    cal = None
    if cfg.mitigation == "local":
        cal = {label.split("/", 1)[1]: h for label, h in counts.items() if label.startswith("cal/")}
    game_counts = {k: v for k, v in counts.items() if not k.startswith("cal/")}
    return score_histograms(cfg.game, game_counts, cal), counts


def run(cfg: RunConfig) -> GameResult:
    """All repetitions; writes report and counts when ``cfg.out`` is set."""
    noise = cfg.noise_model()
    reps = range(cfg.repetitions)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            outcomes = list(pool.map(lambda r: run_repetition(cfg, r, noise), reps))
    else:
        outcomes = [run_repetition(cfg, r, noise) for r in reps]
    result = combine_repetitions([o[0] for o in outcomes], cfg.mitigation == "local")
    result.notes["noise"] = "none" if noise is None else str(cfg.noise)
    result.notes["noise_presets"] = "illustrative, not calibrated to any device"
    if cfg.out:
        out = Path(cfg.out)
        for rep, (_, counts) in enumerate(outcomes):
            write_counts(counts, out / "counts" / f"rep{rep:03d}")
        write_report(run_report(cfg, result), out / "report.json")
        write_report(
            {"created": datetime.now(timezone.utc).isoformat(), "out": str(out), "workers": cfg.workers},
            out / "metadata.json",
        )
    return result


def run_report(cfg: RunConfig, result: GameResult) -> dict:
    # output location and worker count do not affect results and stay out of the report
    config = {k: v for k, v in asdict(cfg).items() if k not in ("out", "workers")}
    report = result.to_dict()
    report["config"] = config
    return report


def write_report(report: dict, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=False) + "\n")


def write_counts(counts: Mapping[str, Histogram], root: str | Path) -> None:
    for label, h in counts.items():
        path = Path(root) / f"{label}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        save_histogram(h, path)


def read_counts(game: str, root: str | Path) -> dict[str, Histogram]:
    root = Path(root)
    counts = {}
    for label in game_circuits(game, optimized=False):
        path = root / f"{label}.json"
        if not path.is_file():
            raise IncompleteInputError(f"missing counts file {path}")
        counts[label] = load_histogram(path)
    return counts


def score_dir(game: str, counts_dir: str | Path, calibration_dir: str | Path | None = None) -> GameResult:
    counts = read_counts(game, counts_dir)
    cal = load_calibration_dir(calibration_dir) if calibration_dir is not None else None
    return score_histograms(game, counts, cal)


def bound_report(operator: str, partitions: int = 1, workers: int = 1) -> dict:
    """Exhaustive LHV bound with the quantum value and the classical win threshold."""
    if operator == "triangle":
        b = max_lhv_triangle(triangle_spec(), partitions, workers)
        return _bound_dict(operator, b, b.value, 1.0, b.value)
    spec: BellGameSpec = bell_spec(operator)
    b = max_lhv_bell(spec, partitions, workers)
    report = _bound_dict(operator, b, b.value, spec.quantum_value, (1 + b.value / spec.quantum_value) / 2)
    identity_terms = [t for t in spec.terms if t.is_identity]
    if identity_terms:
        without = max_lhv_terms([t for t in spec.terms if not t.is_identity])
        report["lhv_max_without_identity"] = without.value
        report["identity_convention"] = "identity term counted as a constant +1 inside lhv_max"
    return report


def _bound_dict(operator: str, b: LhvBound, value, q, threshold) -> dict:
    return {
        "operator": operator,
        "lhv_max": value,
        "quantum_value": q,
        "classical_threshold": threshold,
        "maximizers": b.maximizers,
        "assignments": b.assignments,
        "variables": len(b.variables),
        "example_assignment": b.example.to_dict(),
    }


def export_circuits(game: str, out: str | Path) -> list[Path]:
    """Write original and optimized circuits (game plus calibration) as JSON files."""
    written = []
    for variant, optimized in (("original", False), ("optimized", True)):
        todo = dict(game_circuits(game, optimized))
        todo.update(calibration_circuits())
        for label, c in sorted(todo.items()):
            path = Path(out) / variant / f"{label}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            C.save_circuit(c, path)
            written.append(path)
    return written
