"""Pauli strings with exact phase tracking, and ring cluster-state stabilizers.

A :class:`PauliString` is ``i**phase * P_1 ⊗ ... ⊗ P_n`` with each ``P_q`` one
of ``I, X, Y, Z``. Phases are kept as an integer exponent of ``i`` modulo 4,
so signs are never subject to rounding.

Qubits are numbered from 1 in every public function; qubit 1 is the leftmost
letter of the text form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import DimensionError, EnumerationLimitError, FormatError, UnsupportedSizeError

LETTERS = "IXYZ"

# (a, b) -> (exponent of i, letter) for the single-qubit product a·b
_MUL_TABLE: dict[tuple[str, str], tuple[int, str]] = {}
for _a in LETTERS:
    _MUL_TABLE["I", _a] = (0, _a)
    _MUL_TABLE[_a, "I"] = (0, _a)
    _MUL_TABLE[_a, _a] = (0, "I")
for _a, _b, _c in ("XYZ", "YZX", "ZXY"):
    _MUL_TABLE[_a, _b] = (1, _c)
    _MUL_TABLE[_b, _a] = (3, _c)

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}

MAX_ENUMERATION_QUBITS = 24


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli operator ``i**phase * letters``."""

    letters: str
    phase: int = 0

    def __post_init__(self):
        if not self.letters:
            raise DimensionError("a Pauli string needs at least one qubit")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise FormatError(f"invalid Pauli letters {sorted(bad)} in {self.letters!r}")
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls("I" * n)

    @classmethod
    def from_sparse(cls, n: int, ops: Mapping[int, str], sign: int = 1) -> PauliString:
        """Build from ``{qubit: letter}`` with 1-based qubits, e.g. ``{1: "X", 3: "X"}``."""
        letters = ["I"] * n
        for q, letter in ops.items():
            if not 1 <= q <= n:
                raise DimensionError(f"qubit {q} outside 1..{n}")
            letters[q - 1] = letter
        return cls("".join(letters), _sign_to_phase(sign))

    @classmethod
    def parse(cls, text: str) -> PauliString:
        """Parse the text form, e.g. ``"-YXYIXI"`` or ``"XZIIIZ"``."""
        s = text.strip().replace("−", "-")
        for prefix, phase in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if s.startswith(prefix) and s[len(prefix):].isupper():
                return cls(s[len(prefix):], phase)
        return cls(s, 0)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def sign(self) -> int:
        """The real sign of a Hermitian string; raises for ±i phases."""
        if self.phase % 2:
            raise ValueError(f"{self} has imaginary phase")
        return 1 if self.phase == 0 else -1

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    @property
    def support(self) -> tuple[int, ...]:
        """1-based qubits carrying a non-identity letter."""
        return tuple(q + 1 for q, c in enumerate(self.letters) if c != "I")

    def letter(self, q: int) -> str:
        return self.letters[q - 1]

    def unsigned(self) -> PauliString:
        return PauliString(self.letters)

    def commutes(self, other: PauliString) -> bool:
        _check_same_n(self, other)
        anti = sum(
            1 for a, b in zip(self.letters, other.letters) if a != "I" and b != "I" and a != b
        )
        return anti % 2 == 0

    def __mul__(self, other: PauliString) -> PauliString:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.letters, self.phase + 2)

    def __str__(self) -> str:
        return _PHASE_TEXT[self.phase] + self.letters

    def pretty(self) -> str:
        """Sparse subscript form such as ``-Y1 X2 Y3 X5``."""
        body = " ".join(f"{c}{q + 1}" for q, c in enumerate(self.letters) if c != "I")
        sign = {0: "", 1: "i ", 2: "-", 3: "-i "}[self.phase]
        return sign + (body or "I")


def _sign_to_phase(sign: int) -> int:
    if sign == 1:
        return 0
    if sign == -1:
        return 2
    raise ValueError(f"sign must be +1 or -1, got {sign}")


def _check_same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError(f"qubit count mismatch: {a.n} vs {b.n}")


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a·b``, phase included."""
    _check_same_n(a, b)
    phase = a.phase + b.phase
    out = []
    for x, y in zip(a.letters, b.letters):
        k, c = _MUL_TABLE[x, y]
        phase += k
        out.append(c)
    return PauliString("".join(out), phase)


def pauli_product(strings: Iterable[PauliString], n: int) -> PauliString:
    result = PauliString.identity(n)
    for s in strings:
        result = pauli_mul(result, s)
    return result


@dataclass(frozen=True)
class StabilizerSet:
    """The n generators ``s_i = Z_{i-1} X_i Z_{i+1}`` of the periodic cluster state."""

    n: int
    generators: tuple[PauliString, ...]

    def __getitem__(self, i: int) -> PauliString:
        """Generator ``s_i`` for 1-based ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"stabilizer index {i} outside 1..{self.n}")
        return self.generators[i - 1]

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.generators)

    def __len__(self) -> int:
        return self.n


def cluster_stabilizers(n: int) -> StabilizerSet:
    if n < 4:
        raise UnsupportedSizeError(f"ring cluster state needs n >= 4, got {n}")
    gens = []
    for i in range(1, n + 1):
        left = (i - 2) % n + 1
        right = i % n + 1
        gens.append(PauliString.from_sparse(n, {left: "Z", i: "X", right: "Z"}))
    return StabilizerSet(n, tuple(gens))


def mask_from_indices(indices: Iterable[int]) -> int:
    """Bitmask selecting the 1-based generators in ``indices`` (bit ``i-1`` for ``s_i``)."""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def indices_from_mask(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(n) if mask >> i & 1)


def stabilizer_product(stabs: StabilizerSet, mask: int) -> PauliString:
    """Product of the generators selected by ``mask``, taken in ascending index order."""
    if mask < 0 or mask >> stabs.n:
        raise DimensionError(f"mask {mask:#x} is not an {stabs.n}-bit mask")
    return pauli_product((stabs[i] for i in indices_from_mask(mask, stabs.n)), stabs.n)


def enumerate_products(stabs: StabilizerSet) -> list[tuple[int, PauliString]]:
    """All ``2**n`` stabilizer products as ``(mask, product)`` pairs, ascending by mask."""
    if stabs.n > MAX_ENUMERATION_QUBITS:
        raise EnumerationLimitError(
            f"refusing to enumerate 2**{stabs.n} products (limit n <= {MAX_ENUMERATION_QUBITS})"
        )
    # Gray-code style build: product(mask) = product(mask without top bit) · s_top
    products = [PauliString.identity(stabs.n)]
    for i, gen in enumerate(stabs.generators):
        products.extend(pauli_mul(p, gen) for p in products[: 1 << i])
    return list(enumerate(products))
