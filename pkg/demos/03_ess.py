"""
Finding the ESS
===============

Two independent routes: minimize F over the nonnegative orthant, or solve
g_I = 0 on every support I and keep the point no absent species can invade.
"""

# %%
import numpy as np

import lvess

# %% [markdown]
# Species 2 is outcompeted here. Its invasion rate at `(1, 0)` is
# `0.5 - 0.9 * 1 = -0.4`.

# %%
model = lvess.embed_lotka_volterra(
    lvess.LotkaVolterraModel([1.0, 0.5], [[1.0, 0.9], [0.9, 1.0]])).model
ess = lvess.solve_ess(model)
print("ESS:", ess.n, "support", ess.support, "margins", ess.inequality_margins)

# %% [markdown]
# Enumerating supports finds every stationary point. Only one of them is an
# ESS, and the others can be invaded.

# %%
for point in lvess.enumerate_stationary_points(model):
    tag = lvess.classify_stationary_point(model, point)
    print(point.support, np.round(point.n, 6), tag.tag, "invader", tag.invader, tag.invasion_rate)

# %% [markdown]
# On random communities the two routes agree.

# %%
from lvess.corpus import random_symmetrizable_lv

rng = np.random.default_rng(11)
for _ in range(5):
    m = lvess.embed_lotka_volterra(random_symmetrizable_lv(rng, 5)).model
    a = lvess.solve_ess(m).n
    b = lvess.find_ess_by_enumeration(m).n
    print("support", np.flatnonzero(a > 0).tolist(), "difference", np.max(np.abs(a - b)))
