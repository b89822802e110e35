"""Random model generators for tests, demos and batch experiments."""
from __future__ import annotations

import numpy as np

from .models import GeneralizedModel, LotkaVolterraModel, ResourceModel
from .response import Saturating


def random_symmetric_pd(rng: np.random.Generator, n: int, eps: float = 0.1) -> np.ndarray:
    """``A^T A + eps I`` with ``A`` uniform on ``[0, 1)``: entrywise positive and PD."""
    A = rng.random((n, n))
    return A.T @ A + eps * np.eye(n)


def random_symmetrizable_lv(rng: np.random.Generator, n: int, *, balanced: bool = True,
                            r_low: float = 0.05) -> LotkaVolterraModel:
    """Lotka-Volterra system ``b = diag(c)^-1 S`` with ``S`` symmetric PD.

    With ``balanced=False`` the balancing constants are all one (``b`` is
    symmetric). Rates are uniform on ``[r_low, 1]``.
    """
    S = random_symmetric_pd(rng, n)
    c = np.exp(rng.uniform(-1.0, 1.0, n)) if balanced else np.ones(n)
    b = S / c[:, None]
    r = rng.uniform(r_low, 1.0, n)
    return LotkaVolterraModel(r, b)


def random_resource_model(rng: np.random.Generator, n: int, R: int) -> ResourceModel:
    """Resource model with uptakes in ``[0.1, 1)`` and mortality between 10% and 50% of the maximal intake."""
    eta = rng.uniform(0.1, 1.0, (R, n))
    I0 = rng.uniform(0.5, 2.0, R)
    d = rng.uniform(0.1, 0.5, n) * (eta.T @ I0)
    return ResourceModel(d, eta, I0)


def random_saturating_model(rng: np.random.Generator, n: int, M: int,
                            scale: float = 1.0) -> GeneralizedModel:
    """Generalized model with ``L(x) = s x / (1 + x)`` satisfying (i)-(iii).

    Kernel entries lie in ``[0.1, 1)`` and ``r`` is at most 80% of the
    saturation capacity, which keeps the equilibrium at moderate size
    and its relaxation time bounded.
    """
    K = rng.uniform(0.1, 1.0, (n, M))
    C = np.exp(rng.uniform(-0.5, 0.5, n))
    w = rng.uniform(0.5, 1.5, M)
    capacity = scale * K @ w
    r = rng.uniform(0.1, 0.8, n) * capacity
    return GeneralizedModel.from_kernel(r, K, w, C, Saturating(scale))
