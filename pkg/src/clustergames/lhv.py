"""Exhaustive local-hidden-variable bounds.

A deterministic LHV model fixes a value ±1 for every local observable
``(qubit, letter)``. Only the observables that occur in the operator being
bounded are enumerated. An assignment is packed into an integer with the first
variable (in ``(qubit, letter)`` order) on the most significant bit; bit 0
means +1 and bit 1 means -1, so ascending integers are lexicographic order
over value tuples with +1 < -1.

Each term compiles to ``(support mask, sign)``; its value under assignment
``a`` is ``sign * (-1)**popcount(a & mask)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from .errors import AssignmentError, EnumerationLimitError
from .pauli import PauliString

if TYPE_CHECKING:
    from .games import BellGameSpec, TriangleGameSpec

MAX_VARIABLES = 24
_BLOCK = 1 << 16

Variable = tuple[int, str]


@dataclass(frozen=True)
class LhvAssignment:
    """Values ±1 for local observables keyed by ``(qubit, letter)`` with 1-based qubits."""

    values: Mapping[Variable, int]

    def __post_init__(self):
        for key, v in self.values.items():
            if v not in (1, -1):
                raise ValueError(f"LHV value for {key} must be ±1, got {v}")

    def __getitem__(self, key: Variable) -> int:
        try:
            return self.values[key]
        except KeyError:
            raise AssignmentError(f"no value assigned to {key[1]}{key[0]}") from None

    @classmethod
    def from_pattern(cls, n: int, x_odd=1, x_even=1, y_odd=1, y_even=1, z=1) -> LhvAssignment:
        """Assignment that depends only on letter and qubit parity."""
        values = {}
        for q in range(1, n + 1):
            odd = q % 2 == 1
            values[q, "X"] = x_odd if odd else x_even
            values[q, "Y"] = y_odd if odd else y_even
            values[q, "Z"] = z
        return cls(values)

    def to_dict(self) -> dict[str, int]:
        return {f"{letter}{q}": v for (q, letter), v in sorted(self.values.items())}


def lhv_term_value(a: LhvAssignment, term: PauliString) -> int:
    """``sign(term) * prod(a[q, letter])`` over the term's support; identity gives its sign."""
    value = term.sign
    for q in term.support:
        value *= a[q, term.letter(q)]
    return value


def term_variables(terms: Iterable[PauliString]) -> list[Variable]:
    found = {(q, t.letter(q)) for t in terms for q in t.support}
    return sorted(found)


@dataclass(frozen=True)
class LhvBound:
    """Maximum over all deterministic assignments, how many reach it, and the smallest maximizer."""

    value: float
    maximizers: int
    example: LhvAssignment
    variables: tuple[Variable, ...]
    assignments: int


@dataclass(frozen=True)
class _Compiled:
    variables: tuple[Variable, ...]
    masks: np.ndarray
    signs: np.ndarray
    # conjunction groups: (row index per term); None means plain sum of terms
    groups: np.ndarray | None = None
    n_groups: int = 0

    @property
    def size(self) -> int:
        return 1 << len(self.variables)


def _compile(terms: Sequence[PauliString], variables: Sequence[Variable], groups=None) -> _Compiled:
    v = len(variables)
    if v > MAX_VARIABLES:
        raise EnumerationLimitError(f"{v} LHV variables exceed the limit of {MAX_VARIABLES}")
    pos = {var: v - 1 - k for k, var in enumerate(variables)}
    masks, signs = [], []
    for t in terms:
        m = 0
        for q in t.support:
            m |= 1 << pos[q, t.letter(q)]
        masks.append(m)
        signs.append(t.sign)
    g = None if groups is None else np.asarray(groups, dtype=np.int64)
    return _Compiled(
        tuple(variables),
        np.array(masks, dtype=np.uint32),
        np.array(signs, dtype=np.int8),
        g,
        0 if g is None else int(g.max()) + 1,
    )


def _scores(c: _Compiled, a: np.ndarray) -> np.ndarray:
    parity = np.bitwise_count(a[:, None] & c.masks[None, :]) & 1
    values = c.signs[None, :] * (1 - 2 * parity.astype(np.int8))
    if c.groups is None:
        return values.sum(axis=1, dtype=np.int64)
    # a group (coin row) is won only if every condition in it holds
    failed = np.zeros((a.size, c.n_groups), dtype=bool)
    for k in range(c.n_groups):
        failed[:, k] = (values[:, c.groups == k] < 0).any(axis=1)
    return (~failed).sum(axis=1, dtype=np.int64)


def scan_range(c: _Compiled, start: int, stop: int) -> tuple[int, int, int]:
    """``(max score, count, smallest maximizer)`` over assignments ``start..stop-1``."""
    best, count, first = None, 0, -1
    for lo in range(start, stop, _BLOCK):
        a = np.arange(lo, min(lo + _BLOCK, stop), dtype=np.uint32)
        s = _scores(c, a)
        m = int(s.max())
        hits = s == m
        best, count, first = merge_partials((best, count, first), (m, int(hits.sum()), lo + int(np.argmax(hits))))
    return best, count, first


def merge_partials(x: tuple, y: tuple) -> tuple:
    """Associative merge of ``(max, count, first)`` partial results."""
    if x[0] is None:
        return y
    if y[0] is None:
        return x
    if x[0] != y[0]:
        return x if x[0] > y[0] else y
    return x[0], x[1] + y[1], min(x[2], y[2])


def _search(c: _Compiled, partitions: int, workers: int) -> tuple[int, int, int]:
    size = c.size
    partitions = max(1, min(partitions, size))
    edges = [size * k // partitions for k in range(partitions + 1)]
    ranges = [(lo, hi) for lo, hi in zip(edges, edges[1:]) if hi > lo]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda r: scan_range(c, *r), ranges))
    else:
        parts = [scan_range(c, *r) for r in ranges]
    result = (None, 0, -1)
    for part in parts:
        result = merge_partials(result, part)
    return result


def decode(c: _Compiled, index: int) -> LhvAssignment:
    v = len(c.variables)
    return LhvAssignment({var: -1 if index >> (v - 1 - k) & 1 else 1 for k, var in enumerate(c.variables)})


def max_lhv_terms(terms: Sequence[PauliString], partitions: int = 1, workers: int = 1) -> LhvBound:
    """Largest sum of term values over every ±1 assignment of the occurring observables."""
    c = _compile(terms, term_variables(terms))
    best, count, first = _search(c, partitions, workers)
    return LhvBound(float(best), count, decode(c, first), c.variables, c.size)


def max_lhv_bell(spec: BellGameSpec, partitions: int = 1, workers: int = 1) -> LhvBound:
    return max_lhv_terms(spec.terms, partitions, workers)


def max_lhv_triangle(spec: TriangleGameSpec, partitions: int = 1, workers: int = 1) -> LhvBound:
    """Best deterministic win probability over the coin rows (shared randomness cannot beat it)."""
    terms, groups = [], []
    for k, coins in enumerate(sorted(spec.rows)):
        for cond in spec.rows[coins]:
            terms.append(cond.signed)
            groups.append(k)
    c = _compile(terms, term_variables(terms), groups)
    best, count, first = _search(c, partitions, workers)
    return LhvBound(best / len(spec.rows), count, decode(c, first), c.variables, c.size)
