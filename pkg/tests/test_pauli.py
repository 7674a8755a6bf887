import numpy as np
import pytest
from hypothesis import given, strategies as st

from clustergames.errors import DimensionError, EnumerationLimitError, UnsupportedSizeError
from clustergames.pauli import (
    PauliString,
    StabilizerSet,
    cluster_stabilizers,
    enumerate_products,
    mask_from_indices,
    pauli_mul,
    stabilizer_product,
)

import oracles

# independent dense-matrix enumeration of all 64 products (tests/oracles.py)
NEGATIVE_PRODUCTS_N6 = 18


def paulis(n):
    return st.builds(PauliString, st.text("IXYZ", min_size=n, max_size=n), st.integers(0, 3))


def as_matrix(p):
    return oracles.dense(p.letters, 1j ** p.phase)


def test_single_qubit_xy():
    assert pauli_mul(PauliString("X"), PauliString("Y")) == PauliString("Z", 1)
    assert pauli_mul(PauliString("Y"), PauliString("X")) == PauliString("Z", 3)


@given(paulis(3), paulis(3))
def test_mul_matches_dense_product(a, b):
    assert np.allclose(as_matrix(a * b), as_matrix(a) @ as_matrix(b))


@given(paulis(4), paulis(4), paulis(4))
def test_associative(a, b, c):
    assert a * (b * c) == (a * b) * c


@given(paulis(5))
def test_identity_element(a):
    e = PauliString.identity(5)
    assert e * a == a == a * e


def test_length_mismatch():
    with pytest.raises(DimensionError):
        pauli_mul(PauliString("XX"), PauliString("X"))


@pytest.mark.parametrize("text", ["-YXYIXI", "+XIXIXI", "+iXZ", "-iYY", "+IIII"])
def test_text_round_trip(text):
    assert str(PauliString.parse(text)) == text


def test_parse_accepts_unicode_minus_and_bare_letters():
    assert PauliString.parse("−YXYIXI") == PauliString("YXYIXI", 2)
    assert PauliString.parse("XZ") == PauliString("XZ")


def test_cluster_generators_n6():
    s = cluster_stabilizers(6)
    assert s[1] == PauliString("XZIIIZ")
    assert s[3] == PauliString.from_sparse(6, {2: "Z", 3: "X", 4: "Z"})
    assert cluster_stabilizers(4)[4] == PauliString("ZIZX")


def test_cluster_invariants():
    for n in (4, 6, 8):
        s = cluster_stabilizers(n)
        for i in range(1, n + 1):
            assert set(s[i].support) == {(i - 2) % n + 1, i, i % n + 1}
            assert s[i].phase == 0
            for j in range(1, n + 1):
                assert s[i].commutes(s[j])


def test_cluster_size_guard():
    with pytest.raises(UnsupportedSizeError):
        cluster_stabilizers(3)


def test_stabilizer_identities():
    s = cluster_stabilizers(6)
    assert stabilizer_product(s, mask_from_indices([1, 3, 5])) == PauliString("XIXIXI")
    assert stabilizer_product(s, mask_from_indices([1, 2, 3, 5])) == PauliString.parse("-YXYIXI")
    assert stabilizer_product(s, 0) == PauliString.identity(6)
    for i in range(1, 7):
        assert s[i] * s[i] == PauliString.identity(6)


def test_products_match_dense_oracle():
    s = cluster_stabilizers(6)
    mats = [oracles.ring_stabilizer_matrix(i, 6) for i in range(1, 7)]
    for mask in (0b000001, 0b010101, 0b010111, 0b111111, 0b101101):
        m = np.eye(64)
        for i in range(6):
            if mask >> i & 1:
                m = m @ mats[i]
        coeff, letters = oracles.decompose(m, 6)
        p = stabilizer_product(s, mask)
        assert p.letters == letters
        assert coeff == {0: 1, 2: -1}[p.phase]


def test_enumerate_products():
    s6 = cluster_stabilizers(6)
    entries = enumerate_products(s6)
    assert [m for m, _ in entries] == list(range(64))
    assert len({(p.phase, p.letters) for _, p in entries}) == 64
    assert all(p.phase in (0, 2) for _, p in entries)
    assert sum(p.phase == 2 for _, p in entries) == NEGATIVE_PRODUCTS_N6
    assert len(enumerate_products(cluster_stabilizers(4))) == 16
    for m, p in entries:
        assert p == stabilizer_product(s6, m)


def test_all_products_commute():
    ps = [p for _, p in enumerate_products(cluster_stabilizers(6))]
    assert all(a.commutes(b) for a in ps for b in ps)


@given(st.integers(0, 63), st.integers(0, 63))
def test_group_homomorphism(a, b):
    s = cluster_stabilizers(6)
    # generators commute, so the product over a XOR b equals the product of the two products
    assert stabilizer_product(s, a ^ b) == stabilizer_product(s, a) * stabilizer_product(s, b)


@given(st.permutations([1, 2, 3, 5]))
def test_order_independent(order):
    s = cluster_stabilizers(6)
    p = PauliString.identity(6)
    for i in order:
        p = p * s[i]
    assert p == PauliString.parse("-YXYIXI")


def test_enumeration_guard():
    big = StabilizerSet(25, tuple(PauliString("X" * 25) for _ in range(25)))
    with pytest.raises(EnumerationLimitError):
        enumerate_products(big)
