"""Dense state-vector simulation with Pauli-trajectory gate noise and readout flips.

Amplitudes are stored as a tensor with one axis per qubit, axis ``q-1`` for
qubit ``q``, so flattening in C order puts qubit 1 on the most significant bit
and outcome strings read qubit 1 first.

Randomness is counter based. Every (seed, circuit label) pair keys a Philox
stream and shot ``k`` consumes the fixed block of draws
``[k*D, (k+1)*D)`` of that stream, where ``D`` depends only on the circuit.
A shot's outcome is therefore independent of how the shots are split across
workers.
"""

from __future__ import annotations

import json
import zlib
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .circuits import Circuit, Gate
from .errors import ConfigError, DimensionError, FormatError, GateError, InvalidObservableError
from .pauli import PauliString

MAX_QUBITS = 12

_SQRT_HALF = 1 / np.sqrt(2)
# trajectories apply H without its 1/sqrt(2) and fold 2**-k into the probabilities,
# keeping Clifford amplitudes exact Gaussian integers
_H_UNSCALED = np.array([[1, 1], [1, -1]], dtype=complex)
_ONE_QUBIT = {
    "H": _H_UNSCALED * _SQRT_HALF,
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
}
_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}
_NON_IDENTITY_1Q = ("X", "Y", "Z")
_NON_IDENTITY_2Q = tuple((a, b) for a in "IXYZ" for b in "IXYZ" if (a, b) != ("I", "I"))


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise DimensionError(f"state vectors support 1..{MAX_QUBITS} qubits, got {self.n}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(1 << self.n)

    @classmethod
    def zero(cls, n: int) -> StateVector:
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1
        return cls(n, amps)

    def copy(self) -> StateVector:
        return StateVector(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def distribution(self, tol: float = 1e-15) -> dict[str, float]:
        """Born probabilities keyed by outcome string, dropping numerically zero entries."""
        return {
            format(i, f"0{self.n}b"): float(p)
            for i, p in enumerate(self.probabilities())
            if p > tol
        }


@dataclass(frozen=True)
class NoiseModel:
    """Gate depolarizing rates and per-qubit readout flips ``(P(1|0), P(0|1))``."""

    p1: float = 0.0
    p2: float = 0.0
    readout: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "readout", tuple((float(a), float(b)) for a, b in self.readout))
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name}={p} outside [0, 1]")
        for q, (e01, e10) in enumerate(self.readout, 1):
            if not (0.0 <= e01 < 1.0 and 0.0 <= e10 < 1.0):
                raise ConfigError(f"readout pair for qubit {q} outside [0, 1)")
            if 1.0 - e01 - e10 <= 0.0:
                raise ConfigError(f"readout confusion for qubit {q} is not invertible")

    @classmethod
    def uniform_readout(cls, n: int, e01: float, e10: float | None = None, p1=0.0, p2=0.0):
        e10 = e01 if e10 is None else e10
        return cls(p1, p2, ((e01, e10),) * n)

    @property
    def has_gate_noise(self) -> bool:
        return self.p1 > 0 or self.p2 > 0

    def readout_for(self, n: int) -> np.ndarray:
        if not self.readout:
            return np.zeros((n, 2))
        if len(self.readout) != n:
            raise DimensionError(f"noise model has {len(self.readout)} readout pairs, circuit has {n} qubits")
        return np.array(self.readout)

    def to_dict(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "readout": [list(r) for r in self.readout]}

    @classmethod
    def from_dict(cls, data: Mapping) -> NoiseModel:
        try:
            return cls(float(data["p1"]), float(data["p2"]), tuple(tuple(r) for r in data["readout"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise FormatError(f"malformed noise model: {exc}") from exc


def save_noise_model(noise: NoiseModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(noise.to_dict(), indent=2) + "\n")


def load_noise_model(path: str | Path) -> NoiseModel:
    try:
        return NoiseModel.from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read noise model {path}: {exc}") from exc


def noise_presets() -> list[str]:
    root = resources.files("clustergames") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> NoiseModel:
    """Named illustrative noise model shipped with the package (not device calibrated)."""
    path = resources.files("clustergames") / "presets" / f"{name}.json"
    if not path.is_file():
        raise ConfigError(f"unknown noise preset {name!r}; available: {noise_presets()}")
    return NoiseModel.from_dict(json.loads(path.read_text()))


@dataclass
class Histogram:
    n: int
    shots: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.counts = {k: int(v) for k, v in self.counts.items()}
        if self.shots < 1:
            raise FormatError("a histogram needs at least one shot")
        for k, v in self.counts.items():
            if len(k) != self.n or set(k) - {"0", "1"}:
                raise FormatError(f"bad outcome key {k!r} for {self.n} qubits")
            if v < 0:
                raise FormatError(f"negative count for {k!r}")
        if sum(self.counts.values()) != self.shots:
            raise FormatError(f"counts sum to {sum(self.counts.values())}, expected {self.shots}")

    def frequencies(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}

    def to_dict(self) -> dict:
        return {"n": self.n, "shots": self.shots, "counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_dict(cls, data: Mapping) -> Histogram:
        try:
            return cls(int(data["n"]), int(data["shots"]), dict(data["counts"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed histogram: {exc}") from exc


def save_histogram(h: Histogram, path: str | Path) -> None:
    Path(path).write_text(json.dumps(h.to_dict(), indent=2) + "\n")


def load_histogram(path: str | Path) -> Histogram:
    try:
        return Histogram.from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read histogram {path}: {exc}") from exc


# --- gate kernels on a batch tensor of shape (batch, 2, ..., 2) ---------------


def _apply_1q(psi: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    axis = q  # batch axis is 0, qubit q sits on axis q
    return np.moveaxis(np.tensordot(u, psi, axes=([1], [axis])), 0, axis)


def _apply_2q(psi: np.ndarray, kind: str, a: int, b: int) -> np.ndarray:
    psi = psi.copy()
    sel = [slice(None)] * psi.ndim
    sel[a] = 1
    sel[b] = 1
    if kind == "CZ":
        psi[tuple(sel)] *= -1
    else:
        sel0 = list(sel)
        sel0[b] = 0
        s1, s0 = tuple(sel), tuple(sel0)
        psi[s0], psi[s1] = psi[s1].copy(), psi[s0].copy()
    return psi


def _apply(psi: np.ndarray, gate: Gate, scaled: bool = True) -> np.ndarray:
    if gate.kind == "H" and not scaled:
        return _apply_1q(psi, _H_UNSCALED, gate.qubits[0])
    if gate.kind in _ONE_QUBIT:
        return _apply_1q(psi, _ONE_QUBIT[gate.kind], gate.qubits[0])
    return _apply_2q(psi, gate.kind, *gate.qubits)


def _check_gate(gate: Gate, n: int) -> None:
    for q in gate.qubits:
        if not 1 <= q <= n:
            raise GateError(f"{gate} touches qubit outside 1..{n}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    _check_gate(gate, state.n)
    psi = state.amplitudes.reshape((1,) + (2,) * state.n)
    return StateVector(state.n, _apply(psi, gate))


def _apply_pauli_rows(psi: np.ndarray, rows: np.ndarray, q: int, letter: str) -> None:
    if letter == "I" or not rows.size:
        return
    psi[rows] = _apply_1q(psi[rows], _PAULI[letter], q)


# --- trajectories and sampling -------------------------------------------------


def _draws_per_shot(circuit: Circuit) -> int:
    # per gate: (error?, which Pauli); then n readout draws and one measurement draw
    d = 2 * len(circuit.gates) + circuit.n + 1
    return -(-d // 4) * 4  # Philox emits blocks of four 64-bit words


def shot_draws(circuit: Circuit, seed: int, start: int, stop: int) -> np.ndarray:
    """Uniform draws for shots ``start..stop-1``; row ``k - start`` belongs to shot ``k``."""
    d = _draws_per_shot(circuit)
    bitgen = np.random.Philox(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(zlib.crc32(circuit.label.encode()),))
    )
    bitgen.advance(start * d // 4)
    return np.random.Generator(bitgen).random((stop - start, d))


def _trajectories(circuit: Circuit, noise: NoiseModel | None, draws: np.ndarray) -> tuple[np.ndarray, int]:
    """Unnormalized final states (one row per shot) and the number of H gates applied.

    The normalized state is ``psi * 2**(-h/2)``.
    """
    n = circuit.n
    batch = draws.shape[0]
    noisy = noise is not None and noise.has_gate_noise
    psi = np.zeros((1 if not noisy else batch,) + (2,) * n, dtype=complex)
    psi[(slice(None),) + (0,) * n] = 1
    for g_idx, gate in enumerate(circuit.gates):
        _check_gate(gate, n)
        psi = _apply(psi, gate, scaled=False)
        if not noisy:
            continue
        two = len(gate.qubits) == 2
        p = noise.p2 if two else noise.p1
        rows = np.flatnonzero(draws[:, 2 * g_idx] < p)
        if not rows.size:
            continue
        choices = _NON_IDENTITY_2Q if two else _NON_IDENTITY_1Q
        picks = np.minimum((draws[rows, 2 * g_idx + 1] * len(choices)).astype(int), len(choices) - 1)
        for c_idx, choice in enumerate(choices):
            sel = rows[picks == c_idx]
            letters = choice if two else (choice,)
            for q, letter in zip(gate.qubits, letters):
                _apply_pauli_rows(psi, sel, q, letter)
    if psi.shape[0] != batch:
        psi = np.broadcast_to(psi, (batch,) + psi.shape[1:])
    return psi, circuit.count("H")


def _born(psi: np.ndarray, h_count: int) -> np.ndarray:
    flat = psi.reshape(psi.shape[0], -1)
    return (flat.real**2 + flat.imag**2) * 2.0**-h_count


def run_circuit(circuit: Circuit, noise: NoiseModel | None = None, seed: int = 0, shot: int = 0) -> StateVector:
    """Final state of one trajectory; deterministic for a noiseless run."""
    if circuit.n > MAX_QUBITS:
        raise DimensionError(f"at most {MAX_QUBITS} qubits supported")
    draws = shot_draws(circuit, seed, shot, shot + 1)
    psi, h_count = _trajectories(circuit, noise, draws)
    scale = 2.0 ** -(h_count // 2) * (_SQRT_HALF if h_count % 2 else 1.0)
    return StateVector(circuit.n, psi[0].reshape(-1) * scale)


def exact_distribution(circuit: Circuit, tol: float = 1e-15) -> dict[str, float]:
    """Noiseless Born distribution of the circuit's outcomes.

    Exact in floating point for circuits over this gate set of moderate depth.
    """
    psi, h_count = _trajectories(circuit, None, np.zeros((1, 1)))
    probs = _born(psi, h_count)[0]
    return {format(i, f"0{circuit.n}b"): float(p) for i, p in enumerate(probs) if p > tol}


def _sample_block(circuit: Circuit, noise: NoiseModel | None, seed: int, start: int, stop: int) -> Counter:
    n = circuit.n
    draws = shot_draws(circuit, seed, start, stop)
    psi, h_count = _trajectories(circuit, noise, draws)
    probs = _born(psi, h_count)
    cdf = np.cumsum(probs, axis=1)
    g2 = 2 * len(circuit.gates)
    u = draws[:, g2 + n] * cdf[:, -1]
    outcome = np.minimum((cdf <= u[:, None]).sum(axis=1), (1 << n) - 1)
    bits = (outcome[:, None] >> np.arange(n - 1, -1, -1)) & 1
    if noise is not None and noise.readout:
        rates = noise.readout_for(n)
        flip_prob = np.where(bits == 0, rates[:, 0], rates[:, 1])
        ro = draws[:, g2: g2 + n]
        bits = bits ^ (ro < flip_prob)
    weights = 1 << np.arange(n - 1, -1, -1)
    codes = bits @ weights
    return Counter(format(int(c), f"0{n}b") for c in codes)


def sample(
    circuit: Circuit,
    shots: int,
    noise: NoiseModel | None = None,
    seed: int = 0,
    workers: int = 1,
    chunk: int = 4096,
) -> Histogram:
    """Measure every qubit ``shots`` times; each shot draws its own noise trajectory.

    Results are identical for any ``workers``/``chunk`` choice.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    if circuit.n > MAX_QUBITS:
        raise DimensionError(f"at most {MAX_QUBITS} qubits supported")
    bounds = [(s, min(s + chunk, shots)) for s in range(0, shots, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _sample_block(circuit, noise, seed, *b), bounds))
    else:
        parts = [_sample_block(circuit, noise, seed, *b) for b in bounds]
    counts: Counter = Counter()
    for part in parts:
        counts.update(part)
    return Histogram(circuit.n, shots, dict(sorted(counts.items())))


def expectation(state: StateVector, p: PauliString) -> float:
    """``<psi|P|psi>`` including the string's sign."""
    if p.n != state.n:
        raise DimensionError(f"observable on {p.n} qubits, state has {state.n}")
    if not p.is_hermitian:
        raise InvalidObservableError(f"{p} is not Hermitian")
    psi = state.amplitudes.reshape((1,) + (2,) * state.n)
    out = psi
    for q, letter in enumerate(p.letters, 1):
        if letter != "I":
            out = _apply_1q(out, _PAULI[letter], q)
    value = p.sign * np.vdot(psi.reshape(-1), out.reshape(-1))
    return float(np.clip(value.real, -1.0, 1.0))


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``p`` (qubit 1 is the most significant factor)."""
    m = np.array([[1.0 + 0j]])
    for letter in p.letters:
        m = np.kron(m, _PAULI.get(letter, np.eye(2)))
    return (1j ** p.phase) * m


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full unitary, column ``j`` being the circuit applied to basis state ``j``."""
    n = circuit.n
    psi = np.eye(1 << n, dtype=complex).reshape((1 << n,) + (2,) * n)
    for gate in circuit.gates:
        _check_gate(gate, n)
        psi = _apply(psi, gate)
    return psi.reshape(1 << n, 1 << n).T


def basis_state(bits: Sequence[int] | str) -> StateVector:
    bits = [int(b) for b in bits]
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int("".join(map(str, bits)), 2)] = 1
    return StateVector(len(bits), amps)
