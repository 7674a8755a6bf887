"""Readout errors, and undoing them without letting the players talk to each other."""

# %%
import numpy as np

from clustergames import NoiseModel, build_calibration_circuits, build_triangle_circuits, mitigate, optimize, sample, score_triangle
from clustergames.mitigation import calibrate

noise = NoiseModel.uniform_readout(6, 0.05)
circuits = {k: optimize(c) for k, c in build_triangle_circuits().items()}

# %% Four calibration circuits give every player all four two-qubit basis states
cal = {s: sample(c, 1024, noise, seed=1) for s, c in build_calibration_circuits().items()}
matrices, inverses = calibrate(cal)
np.set_printoptions(precision=3, suppress=True)
print("player 1 confusion matrix (columns = prepared 00, 01, 10, 11):")
print(matrices[0].matrix)

# %% Each player applies their own 4x4 inverse to their own bits
hists = {k: sample(c, 1024, noise, seed=2) for k, c in circuits.items()}
raw = score_triangle(hists).win_probability
mitigated = score_triangle({k: mitigate(h, inverses) for k, h in hists.items()}).win_probability
print(f"raw win rate {raw:.4f}, locally mitigated {mitigated:.4f}")
