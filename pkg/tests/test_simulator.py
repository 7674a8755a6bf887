import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clustergames.circuits import Circuit, Gate, build_cluster_prep, build_triangle_circuits
from clustergames.errors import ConfigError, FormatError, GateError, InvalidObservableError
from clustergames.games import parity_sign
from clustergames.pauli import PauliString, cluster_stabilizers
from clustergames.simulator import (
    Histogram,
    NoiseModel,
    StateVector,
    apply_gate,
    basis_state,
    circuit_unitary,
    expectation,
    load_histogram,
    load_noise_model,
    load_preset,
    noise_presets,
    run_circuit,
    sample,
    save_histogram,
    save_noise_model,
)

import oracles

# <s_i> after the cluster preparation with p2 = 1 (every CZ followed by a uniformly
# random non-identity two-qubit Pauli), from the density-matrix oracle
DEPOLARIZED_S = {
    1: Fraction(-1, 3375),
    2: Fraction(1, 50625),
    3: Fraction(-1, 3375),
    4: Fraction(-1, 3375),
    5: Fraction(-1, 3375),
    6: Fraction(1, 225),
}


def test_single_gates():
    plus = apply_gate(StateVector.zero(1), Gate("H", (1,)))
    assert np.allclose(plus.amplitudes, [2**-0.5, 2**-0.5])
    s11 = apply_gate(basis_state("11"), Gate("CZ", (1, 2)))
    assert np.allclose(s11.amplitudes, [0, 0, 0, -1])
    sdg = apply_gate(basis_state("1"), Gate("Sdg", (1,)))
    assert np.allclose(sdg.amplitudes, [0, -1j])


def test_qubit_one_is_leftmost():
    state = apply_gate(StateVector.zero(3), Gate("X", (1,)))
    assert state.distribution() == {"100": 1.0}
    state = apply_gate(state, Gate("CNOT", (1, 3)))
    assert state.distribution() == {"101": 1.0}


def test_gate_errors():
    with pytest.raises(GateError):
        apply_gate(StateVector.zero(2), Gate("H", (3,)))
    with pytest.raises(GateError):
        Gate("CZ", (1, 1))


gate_strategy = st.one_of(
    st.builds(lambda k, q: Gate(k, (q,)), st.sampled_from(["H", "S", "Sdg", "X"]), st.integers(1, 4)),
    st.builds(
        lambda k, qs: Gate(k, tuple(qs)),
        st.sampled_from(["CZ", "CNOT"]),
        st.lists(st.integers(1, 4), min_size=2, max_size=2, unique=True),
    ),
)


@settings(max_examples=40, deadline=None)
@given(st.lists(gate_strategy, max_size=20))
def test_random_circuits_match_dense_oracle(gates):
    c = Circuit(4, tuple(gates))
    state = StateVector.zero(4)
    for g in gates:
        state = apply_gate(state, g)
        assert abs(state.norm() - 1) < 1e-12
    ref = oracles.unitary([(g.kind, g.qubits) for g in gates], 4)
    assert np.allclose(circuit_unitary(c), ref, atol=1e-12)
    assert np.allclose(run_circuit(c).amplitudes, ref[:, 0], atol=1e-12)


def test_cluster_state_stabilized():
    state = run_circuit(build_cluster_prep(6))
    assert np.allclose(state.amplitudes, oracles.cluster_state(6))
    for s in cluster_stabilizers(6):
        assert expectation(state, s) == pytest.approx(1, abs=1e-12)
    assert expectation(state, PauliString.parse("-YXYIXI")) == pytest.approx(1, abs=1e-12)
    assert expectation(state, PauliString("YXYIXI")) == pytest.approx(-1, abs=1e-12)


def test_z1_expectation_vanishes():
    psi = oracles.cluster_state(6)
    z1 = oracles.dense("ZIIIII")
    assert np.vdot(psi, z1 @ psi).real == pytest.approx(0, abs=1e-12)
    state = run_circuit(build_cluster_prep(6))
    assert expectation(state, PauliString("ZIIIII")) == pytest.approx(0, abs=1e-12)


def test_imaginary_observable_rejected():
    with pytest.raises(InvalidObservableError):
        expectation(StateVector.zero(2), PauliString("XY", 1))


def test_empty_circuit():
    assert run_circuit(Circuit(3)).distribution() == {"000": 1.0}


def test_density_oracle_reproduces_frozen_values():
    rho = oracles.depolarized_cluster_rho(6, 0.0, 1.0)
    for i, expected in DEPOLARIZED_S.items():
        value = np.trace(rho @ oracles.ring_stabilizer_matrix(i, 6)).real
        assert value == pytest.approx(float(expected), abs=1e-12)


def _mean_stabilizers(noise, trajectories):
    prep = build_cluster_prep(6)
    stabs = cluster_stabilizers(6)
    values = np.zeros((trajectories, 6))
    for k in range(trajectories):
        state = run_circuit(prep, noise, seed=11, shot=k)
        values[k] = [expectation(state, s) for s in stabs]
    return values


def test_fully_depolarizing_cz_trajectories():
    values = _mean_stabilizers(NoiseModel(p2=1.0), 3000)
    # Pauli errors keep a stabilizer state, so each trajectory gives exactly ±1
    assert np.allclose(np.abs(values), 1)
    means = values.mean(axis=0)
    assert (means < 1).all()
    se = 1 / np.sqrt(len(values))
    for i, expected in DEPOLARIZED_S.items():
        assert abs(means[i - 1] - float(expected)) < 4 * se


def test_partial_depolarizing_matches_density_matrix():
    noise = NoiseModel(p1=0.05, p2=0.2)
    rho = oracles.depolarized_cluster_rho(6, 0.05, 0.2)
    values = _mean_stabilizers(noise, 3000)
    for i in range(1, 7):
        exact = np.trace(rho @ oracles.ring_stabilizer_matrix(i, 6)).real
        se = np.sqrt(max(1 - exact**2, 1e-3) / len(values))
        assert abs(values[:, i - 1].mean() - exact) < 5 * se


def test_noiseless_sample_zero_state():
    h = sample(Circuit(6, label="zero"), 1024, seed=3)
    assert h.counts == {"000000": 1024}


def test_triangle_000_parities():
    h = sample(build_triangle_circuits()["000"], 1024, seed=5)
    for outcome in h.counts:
        assert parity_sign(outcome, (1, 3, 5)) == 1
        assert parity_sign(outcome, (2, 4, 6)) == 1


def test_readout_flip_binomial():
    p = 0.1
    noise = NoiseModel(readout=((p, 0.0),) + ((0.0, 0.0),) * 5)
    shots = 100_000
    h = sample(Circuit(6, label="zero"), shots, noise, seed=9)
    freq = h.counts.get("100000", 0) / shots
    assert abs(freq - p) < 3 * np.sqrt(p * (1 - p) / shots)
    assert set(h.counts) <= {"000000", "100000"}


def test_born_rule_convergence():
    c = build_triangle_circuits()["011"]
    shots = 100_000
    h = sample(c, shots, seed=21)
    probs = run_circuit(c).probabilities()
    for i, p in enumerate(probs):
        freq = h.counts.get(format(i, "06b"), 0) / shots
        assert abs(freq - p) <= 5 * np.sqrt(p * (1 - p) / shots) + 1e-12


def test_sampling_deterministic_and_partition_free():
    c = build_triangle_circuits()["101"]
    noise = load_preset("readout-mild")
    a = sample(c, 3000, noise, seed=42)
    assert a == sample(c, 3000, noise, seed=42)
    assert a == sample(c, 3000, noise, seed=42, chunk=257, workers=4)
    assert a != sample(c, 3000, noise, seed=43)


def test_histogram_json_round_trip(tmp_path):
    h = sample(build_triangle_circuits()["110"], 500, load_preset("readout-mild"), seed=1)
    save_histogram(h, tmp_path / "h.json")
    assert load_histogram(tmp_path / "h.json") == h
    data = json.loads((tmp_path / "h.json").read_text())
    assert set(data) == {"n", "shots", "counts"}


def test_histogram_validation():
    with pytest.raises(FormatError):
        Histogram(2, 3, {"00": 1, "01": 1})
    with pytest.raises(FormatError):
        Histogram(2, 1, {"0a": 1})


def test_noise_model_round_trip_and_validation(tmp_path):
    noise = NoiseModel(0.001, 0.01, ((0.03, 0.02),) * 6)
    save_noise_model(noise, tmp_path / "n.json")
    assert load_noise_model(tmp_path / "n.json") == noise
    with pytest.raises(ConfigError):
        NoiseModel(readout=((0.5, 0.5),))
    with pytest.raises(ConfigError):
        NoiseModel(p1=1.5)


def test_presets_available():
    assert {"readout-mild", "readout-only"} <= set(noise_presets())
    mild = load_preset("readout-mild")
    assert (mild.p1, mild.p2) == (0.001, 0.01)
    assert mild.readout == ((0.03, 0.03),) * 6
