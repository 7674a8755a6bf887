"""Playing the three-player triangle game on a simulated six-qubit cluster state."""

# %% The state: a ring cluster state, stabilized by s_i = Z_{i-1} X_i Z_{i+1}
from clustergames import (
    build_cluster_prep, build_triangle_circuits, cluster_stabilizers, exact_distribution,
    expectation, optimize, run_circuit, sample, score_triangle, triangle_spec,
)

state = run_circuit(build_cluster_prep(6))
for s in cluster_stabilizers(6):
    print(f"<{s.pretty()}> = {expectation(state, s):+.3f}")

# %% The rules: one row of conditions per coin triple
for coins, conditions in triangle_spec().rows.items():
    print(coins, " and ".join(str(c) for c in conditions))

# %% The quantum strategy wins every row
circuits = build_triangle_circuits()
print("exact:", score_triangle({k: exact_distribution(c) for k, c in circuits.items()}).win_probability)
hists = {k: sample(c, 1024, seed=7) for k, c in circuits.items()}
print("1024 shots per coin:", score_triangle(hists).win_probability)

# %% Rewriting CZ as H-CNOT-H and cancelling H pairs halves the Hadamard count
c = circuits["011"]
print("H gates before/after:", c.count("H"), optimize(c).count("H"))
print(" ".join(str(g) for g in optimize(c).gates))
