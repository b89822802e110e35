"""
Simulating to the ESS
=====================

Integrate from a positive state, watch F decrease, and land on the ESS.
"""

# %%
import numpy as np

import lvess
from lvess.corpus import random_symmetrizable_lv

rng = np.random.default_rng(5)
model = lvess.embed_lotka_volterra(random_symmetrizable_lv(rng, 4)).model
target = lvess.solve_ess(model).n

# %%
traj = lvess.simulate(model, rng.uniform(0.05, 1.0, 4), t_end=1e4)
print(traj.summary())
print("target:", target)
print(lvess.detect_convergence(traj, target, 1e-6))
print(lvess.check_lyapunov_monotone(traj))

# %% [markdown]
# A few snapshots of F along the way.

# %%
for k in np.linspace(0, len(traj.times) - 1, 8).astype(int):
    print(f"t = {traj.times[k]:10.4f}  F = {traj.F_values[k]: .10f}  dF/dt = {traj.dissipation[k]: .3e}")

# %% [markdown]
# Starting next to a stationary point that is not the ESS, a small seed of
# the invader is enough to leave it.

# %%
unstable = [p for p in lvess.enumerate_stationary_points(model) if not p.is_ess]
p = unstable[-1]
n0 = np.where(p.n > 0, p.n, 1e-6)
escape = lvess.simulate(model, n0, t_end=1e4)
print("start near", np.round(p.n, 4), "ends at", np.round(escape.terminal_state, 6))
