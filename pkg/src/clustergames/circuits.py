"""Circuit builders for the triangle game, Bell-operator terms and readout calibration.

Circuits are plain immutable gate lists. Each qubit also carries a declared
measurement basis (``X``, ``Y``, ``Z`` or ``skip``) used only for scoring;
the basis rotation itself is part of the gate list, so a computational-basis
measurement at the end reads out the declared Pauli letter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import FormatError, GateError, InvalidTermError, OptimizerError, UnsupportedSizeError
from .pauli import PauliString

if TYPE_CHECKING:
    from .games import BellGameSpec

ONE_QUBIT_GATES = frozenset({"H", "S", "Sdg", "X"})
TWO_QUBIT_GATES = frozenset({"CZ", "CNOT"})
GATE_KINDS = ONE_QUBIT_GATES | TWO_QUBIT_GATES
BASES = ("X", "Y", "Z", "skip")

# trailing rotation mapping a basis onto the computational basis
_ROTATIONS = {"X": ("H",), "Y": ("Sdg", "H"), "Z": (), "skip": ()}
_LETTER_TO_BASIS = {"I": "skip", "X": "X", "Y": "Y", "Z": "Z"}

CALIBRATION_STATES = ("000000", "010101", "101010", "111111")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind not in GATE_KINDS:
            raise GateError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT_GATES else 1
        if len(self.qubits) != arity:
            raise GateError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != arity:
            raise GateError(f"{self.kind} needs distinct qubits, got {self.qubits}")

    def __str__(self):
        return f"{self.kind}({','.join(map(str, self.qubits))})"


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    label: str = ""
    bases: tuple[str, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.bases is None:
            object.__setattr__(self, "bases", ("Z",) * self.n)
        object.__setattr__(self, "bases", tuple(self.bases))
        if len(self.bases) != self.n:
            raise GateError(f"{len(self.bases)} bases for {self.n} qubits")
        for b in self.bases:
            if b not in BASES:
                raise GateError(f"unknown basis {b!r}")
        for g in self.gates:
            for q in g.qubits:
                if not 1 <= q <= self.n:
                    raise GateError(f"{g} touches qubit outside 1..{self.n}")

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def __len__(self):
        return len(self.gates)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "label": self.label,
            "gates": [{"kind": g.kind, "qubits": list(g.qubits)} for g in self.gates],
            "bases": list(self.bases),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Circuit:
        try:
            gates = tuple(Gate(g["kind"], tuple(g["qubits"])) for g in data["gates"])
            return cls(int(data["n"]), gates, str(data.get("label", "")), tuple(data["bases"]))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed circuit: {exc}") from exc


def save_circuit(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(json.dumps(circuit.to_dict(), indent=2) + "\n")


def load_circuit(path: str | Path) -> Circuit:
    try:
        return Circuit.from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def ring_pairs(n: int) -> list[tuple[int, int]]:
    return [(q, q % n + 1) for q in range(1, n + 1)]


def build_cluster_prep(n: int = 6) -> Circuit:
    """Hadamard on every qubit, then CZ on the ring pairs (1,2), ..., (n,1)."""
    if n < 4 or n % 2:
        raise UnsupportedSizeError(f"cluster preparation needs even n >= 4, got {n}")
    gates = [Gate("H", (q,)) for q in range(1, n + 1)]
    gates += [Gate("CZ", pair) for pair in ring_pairs(n)]
    return Circuit(n, tuple(gates), label=f"cluster/{n}")


def attach_measurement_bases(c: Circuit, bases: Sequence[str], label: str | None = None) -> Circuit:
    bases = tuple(bases)
    if len(bases) != c.n:
        raise GateError(f"{len(bases)} bases for {c.n} qubits")
    tail = [Gate(kind, (q,)) for q, b in enumerate(bases, 1) for kind in _ROTATIONS[b]]
    return Circuit(c.n, c.gates + tuple(tail), c.label if label is None else label, bases)


def triangle_bases(coins: str) -> tuple[str, ...]:
    """Player i reads (X, X) on qubits (2i-1, 2i) for coin 0 and (Y, X) for coin 1."""
    bases = []
    for coin in coins:
        bases += ["X" if coin == "0" else "Y", "X"]
    return tuple(bases)


def coin_rows() -> list[str]:
    return ["".join(bits) for bits in product("01", repeat=3)]


def build_triangle_circuits() -> dict[str, Circuit]:
    """The eight game circuits keyed by coin triple, labelled ``triangle/<coins>``."""
    prep = build_cluster_prep(6)
    return {
        coins: attach_measurement_bases(prep, triangle_bases(coins), f"triangle/{coins}")
        for coins in coin_rows()
    }


def build_calibration_circuits(states: Iterable[str] = CALIBRATION_STATES) -> dict[str, Circuit]:
    circuits = {}
    for s in states:
        gates = tuple(Gate("X", (q,)) for q, bit in enumerate(s, 1) if bit == "1")
        circuits[s] = Circuit(len(s), gates, f"cal/{s}")
    return circuits


def bell_circuit_label(spec_label: str, term: PauliString) -> str:
    return f"bell/{spec_label}/{term}"


def term_bases(term: PauliString) -> tuple[str, ...]:
    return tuple(_LETTER_TO_BASIS[c] for c in term.letters)


def build_bell_circuits(spec: BellGameSpec) -> dict[str, Circuit]:
    """One circuit per non-identity term, keyed by the term's text form."""
    prep = build_cluster_prep(spec.n)
    circuits = {}
    for term in spec.terms:
        if not term.is_hermitian:
            raise InvalidTermError(f"term {term} has an imaginary phase")
        if term.is_identity:
            continue
        label = bell_circuit_label(spec.label, term)
        circuits[str(term)] = attach_measurement_bases(prep, term_bases(term), label)
    return circuits


def optimize(c: Circuit) -> Circuit:
    """Rewrite CZ as H·CNOT·H on the even qubit of the pair, then cancel H pairs.

    Two H gates cancel when nothing else touches their qubit in between.
    """
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind not in GATE_KINDS:
            raise OptimizerError(f"unsupported gate {g}")
        if g.kind == "CZ":
            a, b = g.qubits
            tgt = a if a % 2 == 0 and b % 2 == 1 else b
            ctrl = b if tgt == a else a
            gates += [Gate("H", (tgt,)), Gate("CNOT", (ctrl, tgt)), Gate("H", (tgt,))]
        else:
            gates.append(g)
    return replace(c, gates=tuple(_cancel_hadamards(gates)))


def _cancel_hadamards(gates: list[Gate]) -> list[Gate]:
    # one pass with a per-wire stack of surviving gate positions reaches the fixed point
    out: list[Gate | None] = []
    wires: dict[int, list[int]] = {}
    for g in gates:
        if g.kind == "H":
            stack = wires.setdefault(g.qubits[0], [])
            if stack and out[stack[-1]].kind == "H":
                out[stack.pop()] = None
                continue
        out.append(g)
        for q in g.qubits:
            wires.setdefault(q, []).append(len(out) - 1)
    return [g for g in out if g is not None]
