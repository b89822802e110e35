"""Model classes and growth-rate evaluation.

Three model families are supported:

* :class:`LotkaVolterraModel` -- ``dn_i/dt = (r_i - sum_j b_ij n_j) n_i``
* :class:`ResourceModel` -- resources with Holling II intake
* :class:`GeneralizedModel` -- ``dn_i/dt = g_i(n) n_i`` with
  ``g_i(n) = r_i - sum_m w_m K_im L(sum_j B_jm n_j)`` over a finite weighted
  point set of environment states ``m``.

Everything in this module is immutable and side-effect free.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantError
from .response import Identity, ResponseFunction, Saturating

BALANCE_RTOL = 1e-10


def _frozen(a, name, ndim=None, dtype=float):
    arr = np.array(a, dtype=dtype, copy=True)
    if ndim is not None and arr.ndim != ndim:
        raise InvariantError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvariantError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(k) for k in idx[0])


def as_state(n, size, name="n"):
    """Validate a population vector and return it as a float array."""
    arr = np.asarray(n, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"{name} must have shape ({size},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be entrywise nonnegative")
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finite weighted point measure on the environment states."""

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights, "weights", ndim=1)
        if w.size == 0:
            raise InvariantError("measure needs at least one node")
        if np.any(w < 0):
            raise InvariantError(f"measure weight {_first_bad(w < 0)[0]} is negative")
        if not np.any(w > 0):
            raise InvariantError("measure weights are all zero")
        object.__setattr__(self, "weights", w)

    @property
    def node_count(self) -> int:
        return self.weights.size


@dataclass(frozen=True, eq=False)
class GeneralizedModel:
    """Generalized competitive model on ``N`` species and ``M`` environment nodes.

    Parameters
    ----------
    r : array_like, shape (N,)
        Intrinsic rates.
    K : array_like, shape (N, M)
        Sensitivity kernel ``K_i(alpha_m)``.
    B : array_like, shape (N, M)
        Contribution kernel ``B_j(alpha_m)``; must equal ``diag(C) @ K``.
    measure : DiscreteMeasure or array_like
        Node weights ``w_m``.
    C : array_like, shape (N,)
        Positive balancing constants.
    response : ResponseFunction
        The response ``L``.

    Notes
    -----
    Kernels must be nonnegative unless the response accepts negative
    arguments (only :class:`~lvess.response.Identity` among the built-ins),
    in which case signed kernels such as eigenvector embeddings are allowed.
    """

    r: np.ndarray
    K: np.ndarray
    B: np.ndarray
    measure: DiscreteMeasure
    C: np.ndarray
    response: ResponseFunction = field(default_factory=Identity)

    def __post_init__(self):
        if not isinstance(self.measure, DiscreteMeasure):
            object.__setattr__(self, "measure", DiscreteMeasure(self.measure))
        if not isinstance(self.response, ResponseFunction):
            raise InvariantError("response must be a ResponseFunction")
        r = _frozen(self.r, "r", ndim=1)
        K = _frozen(self.K, "K", ndim=2)
        B = _frozen(self.B, "B", ndim=2)
        C = _frozen(self.C, "C", ndim=1)
        n, m = K.shape
        if r.shape != (n,):
            raise InvariantError(f"r has shape {r.shape}, expected ({n},)")
        if B.shape != K.shape:
            raise InvariantError(f"B has shape {B.shape}, expected {K.shape}")
        if C.shape != (n,):
            raise InvariantError(f"C has shape {C.shape}, expected ({n},)")
        if self.measure.node_count != m:
            raise InvariantError(
                f"measure has {self.measure.node_count} nodes, kernels have {m} columns"
            )
        if np.any(C <= 0):
            raise InvariantError(f"C[{_first_bad(C <= 0)[0]}] must be > 0")
        if not self.response.accepts_negative:
            for name, a in (("K", K), ("B", B)):
                if np.any(a < 0):
                    i, j = _first_bad(a < 0)
                    raise InvariantError(f"{name}[{i}][{j}] = {a[i, j]} is negative")
        CK = C[:, None] * K
        bad = np.abs(B - CK) > BALANCE_RTOL * np.maximum(np.abs(B), np.abs(CK))
        if np.any(bad):
            i, j = _first_bad(bad)
            raise InvariantError(
                f"symmetry condition B = diag(C) K fails at [{i}][{j}]: "
                f"B={B[i, j]!r}, C*K={CK[i, j]!r}"
            )
        for name, a in (("r", r), ("K", K), ("B", B), ("C", C)):
            object.__setattr__(self, name, a)

    @classmethod
    def from_kernel(cls, r, K, weights, C=None, response=None):
        """Build a model with ``B = diag(C) @ K`` computed for you."""
        K = np.asarray(K, dtype=float)
        C = np.ones(K.shape[0]) if C is None else np.asarray(C, dtype=float)
        if C.shape != (K.shape[0],):
            raise InvariantError(f"C has shape {C.shape}, expected ({K.shape[0]},)")
        return cls(r, K, C[:, None] * K, DiscreteMeasure(weights), C,
                   Identity() if response is None else response)

    @property
    def N(self) -> int:
        return self.r.size

    @property
    def M(self) -> int:
        return self.K.shape[1]

    @property
    def weights(self) -> np.ndarray:
        return self.measure.weights

    def environment(self, n):
        """Aggregated environment ``x_m = sum_j B_jm n_j``; no validation."""
        return np.asarray(n, dtype=float) @ self.B

    def restrict(self, species):
        """Sub-model on the given species (faces of the orthant are invariant)."""
        idx = np.asarray(species, dtype=int)
        return GeneralizedModel(self.r[idx], self.K[idx], self.B[idx], self.measure,
                                self.C[idx], self.response)


@dataclass(frozen=True, eq=False)
class LotkaVolterraModel:
    """Competitive Lotka-Volterra system with nonnegative interaction matrix ``b``.

    ``C`` optionally records known balancing constants; it is not checked
    here (see :func:`lvess.symmetry.embed_lotka_volterra`).
    """

    r: np.ndarray
    b: np.ndarray
    C: np.ndarray | None = None

    def __post_init__(self):
        r = _frozen(self.r, "r", ndim=1)
        b = _frozen(self.b, "b", ndim=2)
        if b.shape != (r.size, r.size):
            raise InvariantError(f"b has shape {b.shape}, expected ({r.size}, {r.size})")
        if np.any(b < 0):
            i, j = _first_bad(b < 0)
            raise InvariantError(f"b[{i}][{j}] = {b[i, j]} is negative")
        if self.C is not None:
            C = _frozen(self.C, "C", ndim=1)
            if C.shape != r.shape or np.any(C <= 0):
                raise InvariantError(f"C must be a positive vector of length {r.size}")
            object.__setattr__(self, "C", C)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "b", b)

    @property
    def N(self) -> int:
        return self.r.size


@dataclass(frozen=True, eq=False)
class ResourceModel:
    """Species feeding on ``R`` resources with Holling II intake.

    ``eta`` has shape ``(R, N)``: ``eta[k, i]`` is the uptake of resource
    ``k`` by species ``i``.
    """

    d: np.ndarray
    eta: np.ndarray
    I0: np.ndarray

    def __post_init__(self):
        d = _frozen(self.d, "d", ndim=1)
        eta = _frozen(self.eta, "eta", ndim=2)
        I0 = _frozen(self.I0, "I0", ndim=1)
        if eta.shape[1] != d.size:
            raise InvariantError(f"eta has shape {eta.shape}, expected (R, {d.size})")
        if I0.shape != (eta.shape[0],):
            raise InvariantError(f"I0 has shape {I0.shape}, expected ({eta.shape[0]},)")
        if np.any(eta < 0):
            k, i = _first_bad(eta < 0)
            raise InvariantError(f"eta[{k}][{i}] = {eta[k, i]} is negative")
        if np.any(I0 <= 0):
            raise InvariantError(f"I0[{_first_bad(I0 <= 0)[0]}] must be > 0")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "I0", I0)

    @property
    def N(self) -> int:
        return self.d.size

    @property
    def R(self) -> int:
        return self.I0.size


def _pressure(model: GeneralizedModel, n):
    # sum_m w_m K_im L(x_m)
    x = model.environment(n)
    return model.K @ (model.weights * model.response.value(x))


def _growth(model: GeneralizedModel, n):
    return model.r - _pressure(model, n)


def growth_rates(model: GeneralizedModel, n) -> np.ndarray:
    """Per-capita growth rates ``g(n)``, so that ``dn_i/dt = g_i(n) n_i``."""
    return _growth(model, as_state(n, model.N))


def lv_growth_rates(model: LotkaVolterraModel, n) -> np.ndarray:
    n = as_state(n, model.N)
    return model.r - model.b @ n


def resource_growth_rates(model: ResourceModel, n) -> np.ndarray:
    n = as_state(n, model.N)
    intake = model.I0 / (1.0 + model.eta @ n)
    return -model.d + model.eta.T @ intake


def resource_to_generalized(model: ResourceModel) -> GeneralizedModel:
    """Rewrite a resource model in generalized form.

    Nodes are the resources with weights ``I0``, ``K = B = eta.T``,
    ``C = 1`` and ``L(x) = x / (1 + x)``; the constant part of the intake
    moves into ``r_i = -d_i + sum_k I0_k eta_ki``.
    """
    K = model.eta.T
    r = -model.d + K @ model.I0
    return GeneralizedModel(r, K, K, DiscreteMeasure(model.I0), np.ones(model.N), Saturating(1.0))
