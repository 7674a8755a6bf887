"""Scoring the 55-term Bell operator and turning its value into a win probability."""

# %%
from clustergames import NoiseModel, bell_value, build_bell_circuits, build_s_optimal, exact_distribution, sample
from clustergames.games import win_probability_from_bell

spec = build_s_optimal()
circuits = build_bell_circuits(spec)
print(len(circuits), "circuits, e.g.", next(iter(circuits.values())).label)

# %% Noiseless: every term contributes +1
s = bell_value({k: exact_distribution(c) for k, c in circuits.items()}, spec)
print(f"S = {s:g}, win probability {win_probability_from_bell(s, spec):.4f}")

# %% With gate and readout noise the value drops but can stay above the classical threshold
noise = NoiseModel.uniform_readout(6, 0.02, p1=0.002, p2=0.02)
s = bell_value({k: sample(c, 1024, noise, seed=3) for k, c in circuits.items()}, spec)
print(f"noisy S = {s:.2f}, win probability {win_probability_from_bell(s, spec):.4f}, "
      f"classical threshold {spec.classical_threshold:.4f}")

# %% A measured value of 41 corresponds to
print(f"S = 41 -> {win_probability_from_bell(41, spec):.4f}")
