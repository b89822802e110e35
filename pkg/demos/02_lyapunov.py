"""
The Lyapunov functional
=======================

F is convex, its gradient is -C g, and it decreases along every trajectory
at the rate sum_i C_i n_i g_i^2.
"""

# %%
import numpy as np

import lvess
from lvess.corpus import random_saturating_model

rng = np.random.default_rng(3)
model = random_saturating_model(rng, 4, 3)
n = rng.uniform(0.1, 2.0, 4)

# %%
ev = lvess.evaluate(model, n)
print("F     =", ev.value)
print("grad  =", ev.gradient)
print("-C g  =", -model.C * lvess.growth_rates(model, n))

# %% [markdown]
# A central difference reproduces the gradient.

# %%
h = 1e-6
fd = [(lvess.lyapunov_value(model, n + h * e) - lvess.lyapunov_value(model, n - h * e)) / (2 * h)
      for e in np.eye(4)]
print("finite differences:", np.array(fd))

# %% [markdown]
# The Hessian `B diag(w L') B^T` is positive semidefinite, hence F is convex.

# %%
print("Hessian eigenvalues:", np.linalg.eigvalsh(lvess.lyapunov_hessian(model, n)))

# %% [markdown]
# Along the flow, `dF/dt` equals `grad F . (n * g)`, which is never positive.

# %%
flux = n * lvess.growth_rates(model, n)
print("dF/dt:", ev.dissipation, "chain rule:", ev.gradient @ flux)
