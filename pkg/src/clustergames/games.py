"""The triangle game and the stabilizer Bell-operator games, with their scoring rules.

Outcome bit ``b`` of a measured qubit stands for the eigenvalue ``(-1)**b``.
Scoring accepts raw :class:`~clustergames.simulator.Histogram` objects or any
mapping from outcome string to weight (exact probabilities, or the signed
quasi-probabilities returned by readout mitigation). All scores are linear in
the weights and nothing is clamped here.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence, Union

from .circuits import coin_rows
from .errors import IncompleteInputError
from .lhv import LhvAssignment, lhv_term_value
from .pauli import (
    PauliString,
    cluster_stabilizers,
    enumerate_products,
    mask_from_indices,
    stabilizer_product,
)
from .simulator import Histogram

Distribution = Union[Histogram, Mapping[str, float]]

S_ALL_CLASSICAL_BOUND = 28
S_OPTIMAL_CLASSICAL_BOUND = 19


def as_weights(dist: Distribution) -> Mapping[str, float]:
    """Outcome weights summing to one (for a histogram: relative frequencies)."""
    if isinstance(dist, Histogram):
        return dist.frequencies()
    if hasattr(dist, "weights"):
        return dist.weights
    return dist


def parity_sign(outcome: str, qubits: Sequence[int]) -> int:
    """``prod (-1)**bit`` over the 1-based ``qubits``."""
    return -1 if sum(outcome[q - 1] == "1" for q in qubits) % 2 else 1


def parity_expectation(dist: Distribution, qubits: Sequence[int]) -> float:
    return sum(w * parity_sign(k, qubits) for k, w in as_weights(dist).items())


# --- triangle game ----------------------------------------------------------


class Condition(NamedTuple):
    """``pauli`` (unit phase) must evaluate to ``sign``; ``mask`` selects the stabilizers whose product is ``sign*pauli``."""

    pauli: PauliString
    sign: int
    mask: int

    @property
    def signed(self) -> PauliString:
        return self.pauli if self.sign == 1 else -self.pauli

    def __str__(self):
        return f"{self.pauli.pretty()} = {self.sign:+d}"


@dataclass(frozen=True)
class TriangleGameSpec:
    rows: Mapping[str, tuple[Condition, ...]]
    n: int = 6

    @property
    def coins(self) -> list[str]:
        return sorted(self.rows)


def _cond(text: str, sign: int, stabs: Sequence[int]) -> Condition:
    return Condition(PauliString(text), sign, mask_from_indices(stabs))


def triangle_spec() -> TriangleGameSpec:
    """Winning conditions per coin triple for three players holding qubit pairs (1,2), (3,4), (5,6)."""
    aaa = _cond("XIXIXI", 1, (1, 3, 5))
    bbb = _cond("IXIXIX", 1, (2, 4, 6))
    dea = {
        "011": _cond("XIYXYI", -1, (1, 3, 4, 5)),
        "101": _cond("YIXIYX", -1, (1, 3, 5, 6)),
        "110": _cond("YXYIXI", -1, (1, 2, 3, 5)),
    }
    rows = {}
    for coins in coin_rows():
        conds = [aaa] if coins == "000" else []
        conds.append(bbb)
        if coins in dea:
            conds.append(dea[coins])
        rows[coins] = tuple(conds)
    return TriangleGameSpec(rows)


def check_condition_masks(spec: TriangleGameSpec) -> dict[str, bool]:
    """Whether each condition equals its stabilizer product, sign included."""
    stabs = cluster_stabilizers(spec.n)
    return {
        f"{coins}: {cond}": stabilizer_product(stabs, cond.mask) == cond.signed
        for coins, conds in spec.rows.items()
        for cond in conds
    }


def condition_satisfied(outcome: str, condition: Condition) -> bool:
    return parity_sign(outcome, condition.pauli.support) == condition.sign


def row_win_fraction(dist: Distribution, conditions: Sequence[Condition]) -> float:
    return sum(
        w for k, w in as_weights(dist).items() if all(condition_satisfied(k, c) for c in conditions)
    )


@dataclass
class GameResult:
    game: str
    win_probability: float
    per_circuit: dict[str, float] = field(default_factory=dict)
    std_error: float = 0.0
    mitigated: bool = False
    repetitions: int = 1
    threshold_classical: float = float("nan")
    per_repetition: list[float] = field(default_factory=list)
    bell_value: float | None = None
    bell_std_error: float | None = None
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def win_probability_clamped(self) -> float:
        return min(1.0, max(0.0, self.win_probability))

    def to_dict(self) -> dict:
        out = {
            "game": self.game,
            "win_probability": self.win_probability,
            "win_probability_clamped": self.win_probability_clamped,
            "threshold_classical": self.threshold_classical,
            "per_circuit": dict(sorted(self.per_circuit.items())),
            "std_error": self.std_error,
            "mitigated": self.mitigated,
            "repetitions": self.repetitions,
            "per_repetition": list(self.per_repetition),
        }
        if self.bell_value is not None:
            out["bell_value"] = self.bell_value
            out["bell_std_error"] = self.bell_std_error
        if self.notes:
            out["notes"] = dict(sorted(self.notes.items()))
        return out


TRIANGLE_CLASSICAL_THRESHOLD = 7 / 8


def score_triangle(dists: Mapping[str, Distribution], spec: TriangleGameSpec | None = None) -> GameResult:
    """Mean over the eight coin rows of the weight satisfying every condition of the row."""
    spec = spec or triangle_spec()
    missing = [c for c in spec.coins if c not in dists]
    if missing:
        raise IncompleteInputError(f"missing triangle histograms for coins {missing}")
    per = {f"triangle/{c}": row_win_fraction(dists[c], spec.rows[c]) for c in spec.coins}
    win = math.fsum(per.values()) / len(per)
    return GameResult("triangle", win, per, threshold_classical=TRIANGLE_CLASSICAL_THRESHOLD)


# --- Bell-operator games ----------------------------------------------------


@dataclass(frozen=True)
class BellGameSpec:
    label: str
    terms: tuple[PauliString, ...]
    quantum_value: float
    classical_bound: float
    n: int = 6

    @property
    def measured_terms(self) -> list[PauliString]:
        return [t for t in self.terms if not t.is_identity]

    @property
    def classical_threshold(self) -> float:
        return (1 + self.classical_bound / self.quantum_value) / 2


def build_s_all(n: int = 6) -> BellGameSpec:
    """All ``2**n`` stabilizer products; the identity term counts as a constant +1."""
    if n != 6:
        raise ValueError("the LHV bound of the full product sum is tabulated for n = 6 only")
    terms = tuple(p for _, p in enumerate_products(cluster_stabilizers(n)))
    return BellGameSpec("s_all", terms, float(len(terms)), S_ALL_CLASSICAL_BOUND, n)


def s_optimal_excluded_masks(n: int = 6) -> set[int]:
    """Identity, the single generators and the two alternating triples."""
    return {0} | {1 << i for i in range(n)} | {mask_from_indices((1, 3, 5)), mask_from_indices((2, 4, 6))}


def build_s_optimal() -> BellGameSpec:
    stabs = cluster_stabilizers(6)
    excluded = s_optimal_excluded_masks(6)
    terms = tuple(p for m, p in enumerate_products(stabs) if m not in excluded)
    return BellGameSpec("s_optimal", terms, float(len(terms)), S_OPTIMAL_CLASSICAL_BOUND, 6)


def bell_spec(name: str) -> BellGameSpec:
    if name == "s_all":
        return build_s_all()
    if name == "s_optimal":
        return build_s_optimal()
    raise ValueError(f"unknown Bell game {name!r}")


def term_expectations(dists: Mapping[str, Distribution], spec: BellGameSpec) -> dict[str, float]:
    """Signed expectation of every measured term, keyed by the term's text form."""
    missing = [str(t) for t in spec.measured_terms if str(t) not in dists]
    if missing:
        raise IncompleteInputError(f"missing histograms for {len(missing)} terms, e.g. {missing[0]}")
    return {str(t): t.sign * parity_expectation(dists[str(t)], t.support) for t in spec.measured_terms}


def bell_value(dists: Mapping[str, Distribution], spec: BellGameSpec) -> float:
    identity = sum(t.sign for t in spec.terms if t.is_identity)
    return math.fsum(term_expectations(dists, spec).values()) + identity


def win_probability_from_bell(s: float, spec: BellGameSpec) -> float:
    if spec.quantum_value <= 0:
        raise ValueError("quantum value must be positive")
    return (1 + s / spec.quantum_value) / 2


def score_bell(dists: Mapping[str, Distribution], spec: BellGameSpec) -> GameResult:
    per = term_expectations(dists, spec)
    s = math.fsum(per.values()) + sum(t.sign for t in spec.terms if t.is_identity)
    return GameResult(
        spec.label,
        win_probability_from_bell(s, spec),
        {f"bell/{spec.label}/{k}": v for k, v in per.items()},
        threshold_classical=spec.classical_threshold,
        bell_value=s,
    )


# --- classical strategies ---------------------------------------------------


def classical_rows(assignment: LhvAssignment, spec: TriangleGameSpec | None = None) -> dict[str, bool]:
    """Which coin rows a deterministic strategy wins."""
    spec = spec or triangle_spec()
    return {
        coins: all(lhv_term_value(assignment, c.signed) == 1 for c in conds)
        for coins, conds in spec.rows.items()
    }


def eval_classical_strategy(assignment: LhvAssignment, spec: TriangleGameSpec | None = None) -> float:
    rows = classical_rows(assignment, spec)
    return sum(rows.values()) / len(rows)


def best_classical_assignment(n: int = 6) -> LhvAssignment:
    """X = -1 on odd qubits, X = +1 on even qubits, Y = +1 on odd qubits."""
    return LhvAssignment.from_pattern(n, x_odd=-1, x_even=1, y_odd=1)


def combine_repetitions(results: Sequence[GameResult], mitigated: bool) -> GameResult:
    """Mean over repetitions; standard error is the sample deviation over sqrt(reps)."""
    reps = len(results)
    wins = [r.win_probability for r in results]
    mean = math.fsum(wins) / reps
    se = statistics.stdev(wins) / math.sqrt(reps) if reps > 1 else 0.0
    labels = results[0].per_circuit.keys()
    per = {k: math.fsum(r.per_circuit[k] for r in results) / reps for k in labels}
    out = GameResult(
        results[0].game,
        mean,
        per,
        se,
        mitigated,
        reps,
        results[0].threshold_classical,
        wins,
        notes={"std_error": "sample standard deviation across repetitions / sqrt(repetitions)"},
    )
    if results[0].bell_value is not None:
        values = [r.bell_value for r in results]
        out.bell_value = math.fsum(values) / reps
        out.bell_std_error = statistics.stdev(values) / math.sqrt(reps) if reps > 1 else 0.0
    return out
