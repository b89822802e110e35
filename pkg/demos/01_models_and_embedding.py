"""
Models and the spectral embedding
=================================

Three ways to write down a competitive community, and how a symmetrizable
Lotka-Volterra system becomes a generalized model with L = identity.
"""

# %%
import numpy as np

import lvess

# %% [markdown]
# A Lotka-Volterra system is just rates `r` and a nonnegative interaction
# matrix `b`. This one is not symmetric, but `C = (1, 2)` balances it:
# `C_1 b_12 = 1 * 1.0 = C_2 b_21 = 2 * 0.5`.

# %%
lv = lvess.LotkaVolterraModel(r=[1.0, 0.8], b=[[2.0, 1.0], [0.5, 1.5]])
C = lvess.find_balancing_constants(lv.b)
print("balancing constants:", C)

# %% [markdown]
# The embedding diagonalizes `diag(C) b`. Each eigenpair becomes one
# environment node, and the growth rates agree with the direct formula.

# %%
emb = lvess.embed_lotka_volterra(lv)
print("eigenvalues:", emb.eigenvalues)
n = np.array([0.3, 0.7])
print("direct   g(n):", lv.r - lv.b @ n)
print("embedded g(n):", lvess.growth_rates(emb.model, n))

# %% [markdown]
# If the zero pattern of `b` is not symmetric there is no balancing at all.

# %%
try:
    lvess.find_balancing_constants([[1.0, 1.0], [0.0, 1.0]])
except lvess.NoBalancing as exc:
    print("no balancing:", exc, "witness", exc.witness)

# %% [markdown]
# Resource competition with Holling II intake maps onto the same form, with
# resources as nodes and `L(x) = x / (1 + x)`.

# %%
res = lvess.ResourceModel(d=[0.3, 0.4], eta=[[1.0, 0.2], [0.3, 0.9]], I0=[1.0, 1.5])
gen = lvess.resource_to_generalized(res)
print(lvess.resource_growth_rates(res, n), lvess.growth_rates(gen, n))

# %% [markdown]
# `check_assumptions` reports on the four hypotheses that make the ESS unique.

# %%
report = lvess.check_assumptions(gen)
for key, value in report.to_dict().items():
    print(key, value)
