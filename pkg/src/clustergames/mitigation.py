"""Local (per-player) linear readout mitigation.

Player ``i`` owns qubits ``(2i-1, 2i)``. Their 4x4 confusion matrix ``A_i`` is
column stochastic, ``A_i[r, c] = P(read r | prepared c)``, rows and columns
ordered 00, 01, 10, 11. Mitigation applies ``A_i^{-1}`` to player ``i``'s
axis of the outcome distribution only, which never needs another player's
outcomes. The 64x64 tensor product is never built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .circuits import CALIBRATION_STATES
from .errors import CalibrationDesignError, DimensionError, EmptyInputError, NotInvertibleError
from .simulator import Histogram, load_histogram

DEFAULT_MAX_CONDITION = 1e6
PAIR_STATES = ("00", "01", "10", "11")


@dataclass(frozen=True)
class ConfusionMatrix:
    player: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise DimensionError(f"player confusion matrix must be 4x4, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def is_column_stochastic(self, tol: float = 1e-9) -> bool:
        return bool((self.matrix >= -tol).all() and np.allclose(self.matrix.sum(axis=0), 1, atol=tol))

    def to_dict(self) -> dict:
        return {"player": self.player, "matrix": self.matrix.tolist()}

    @classmethod
    def from_dict(cls, data: Mapping) -> ConfusionMatrix:
        return cls(int(data["player"]), np.array(data["matrix"], dtype=float))


@dataclass(frozen=True)
class QuasiDistribution:
    """Signed outcome weights; negative entries are expected after mitigation."""

    n: int
    weights: Mapping[str, float]

    def total(self) -> float:
        return float(sum(self.weights.values()))

    def to_dict(self) -> dict:
        return {"n": self.n, "weights": dict(sorted(self.weights.items()))}


def player_qubits(player: int) -> tuple[int, int]:
    return 2 * player - 1, 2 * player


def estimate_confusion(calibration: Mapping[str, Histogram], player: int) -> ConfusionMatrix:
    """Column ``c`` holds the pair-outcome frequencies of the calibration run that prepared ``c``."""
    a, b = player_qubits(player)
    columns: dict[str, Histogram] = {}
    for prepared, h in calibration.items():
        pair = prepared[a - 1] + prepared[b - 1]
        if pair in columns:
            raise CalibrationDesignError(f"player {player}: pair state {pair} prepared twice")
        columns[pair] = h
    missing = [p for p in PAIR_STATES if p not in columns]
    if missing:
        raise CalibrationDesignError(f"player {player}: no calibration for pair states {missing}")
    m = np.zeros((4, 4))
    for c, prepared in enumerate(PAIR_STATES):
        h = columns[prepared]
        total = sum(h.counts.values())
        if total == 0:
            raise EmptyInputError(f"calibration histogram for {prepared} has no shots")
        for outcome, count in h.counts.items():
            m[int(outcome[a - 1] + outcome[b - 1], 2), c] += count
        m[:, c] /= total
    return ConfusionMatrix(player, m)


def invert_confusion(cm: ConfusionMatrix, max_condition: float = DEFAULT_MAX_CONDITION) -> np.ndarray:
    cond = np.linalg.cond(cm.matrix)
    if not np.isfinite(cond) or cond > max_condition:
        raise NotInvertibleError(
            f"player {cm.player}: confusion matrix condition number {cond:.3g} exceeds {max_condition:.3g}"
        )
    return np.linalg.inv(cm.matrix)


def calibrate(calibration: Mapping[str, Histogram], players: int = 3, max_condition=DEFAULT_MAX_CONDITION):
    """Confusion matrices and their inverses for every player."""
    matrices = [estimate_confusion(calibration, i) for i in range(1, players + 1)]
    return matrices, [invert_confusion(m, max_condition) for m in matrices]


def _to_tensor(weights: Mapping[str, float], n: int) -> np.ndarray:
    t = np.zeros(1 << n)
    for k, w in weights.items():
        if len(k) != n:
            raise DimensionError(f"outcome {k!r} does not have {n} bits")
        t[int(k, 2)] += w
    return t.reshape((4,) * (n // 2))


def mitigate(h: Histogram | QuasiDistribution | Mapping[str, float], inverses: Sequence[np.ndarray], n: int = 6) -> QuasiDistribution:
    """Normalize to frequencies, then apply each player's inverse on that player's axis."""
    if isinstance(h, Histogram):
        n, weights = h.n, h.frequencies()
    elif isinstance(h, QuasiDistribution):
        n, weights = h.n, h.weights
    else:
        weights = h
    if n % 2 or len(inverses) != n // 2:
        raise DimensionError(f"{len(inverses)} player inverses for {n} qubits")
    t = _to_tensor(weights, n)
    for axis, inv in enumerate(inverses):
        inv = np.asarray(inv)
        if inv.shape != (4, 4):
            raise DimensionError(f"player {axis + 1} inverse must be 4x4, got {inv.shape}")
        t = np.moveaxis(np.tensordot(inv, t, axes=([1], [axis])), 0, axis)
    flat = t.reshape(-1)
    return QuasiDistribution(n, {format(i, f"0{n}b"): float(w) for i, w in enumerate(flat) if w != 0.0})


def load_calibration_dir(path: str | Path, states: Sequence[str] = CALIBRATION_STATES) -> dict[str, Histogram]:
    """Read ``cal/<prepared>.json`` files from a calibration bundle directory."""
    root = Path(path)
    if (root / "cal").is_dir():
        root = root / "cal"
    return {s: load_histogram(root / f"{s}.json") for s in states}


def save_confusion(cm: ConfusionMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cm.to_dict(), indent=2) + "\n")
