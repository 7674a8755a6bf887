"""Simulation, scoring and LHV bounds for six-qubit cluster-state nonlocal games."""

from .circuits import (
    Circuit,
    Gate,
    attach_measurement_bases,
    build_bell_circuits,
    build_calibration_circuits,
    build_cluster_prep,
    build_triangle_circuits,
    optimize,
)
from .games import (
    BellGameSpec,
    GameResult,
    TriangleGameSpec,
    bell_value,
    build_s_all,
    build_s_optimal,
    condition_satisfied,
    eval_classical_strategy,
    score_triangle,
    triangle_spec,
    win_probability_from_bell,
)
from .lhv import LhvAssignment, lhv_term_value, max_lhv_bell, max_lhv_triangle
from .mitigation import ConfusionMatrix, QuasiDistribution, estimate_confusion, invert_confusion, mitigate
from .pauli import PauliString, StabilizerSet, cluster_stabilizers, enumerate_products, pauli_mul, stabilizer_product
from .simulator import (
    Histogram,
    NoiseModel,
    StateVector,
    apply_gate,
    exact_distribution,
    expectation,
    run_circuit,
    sample,
)

__version__ = "0.1.0"
