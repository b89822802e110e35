"""Detailed balance and the spectral embedding of Lotka-Volterra systems.

A Lotka-Volterra matrix ``b`` is *symmetrizable* when some positive ``C``
makes ``m = diag(C) @ b`` symmetric. If ``m`` is moreover positive definite,
its eigendecomposition ``m = sum_a lam_a U^a (U^a)^T`` rewrites the system
in generalized form with ``L = Id``, one environment node per eigenpair,
``B_ja = sqrt(lam_a) U^a_j`` and ``K_ia = B_ia / C_i``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import NoBalancing, NotBalanced, NotPositiveDefinite, NotSymmetric
from .models import DiscreteMeasure, GeneralizedModel, LotkaVolterraModel
from .response import Identity

SYMMETRY_TOL = 1e-10
PD_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    """Generalized model built from a Lotka-Volterra system, plus its spectral data.

    ``eigenvectors[:, a]`` is the unit eigenvector for ``eigenvalues[a]``;
    eigenvalues are sorted in decreasing order.
    """

    model: GeneralizedModel
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    m: np.ndarray
    C: np.ndarray

    def to_dict(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "eigenvectors": self.eigenvectors.tolist(),
            "m": self.m.tolist(),
            "C": self.C.tolist(),
            "K": self.model.K.tolist(),
            "B": self.model.B.tolist(),
            "weights": self.model.weights.tolist(),
            "r": self.model.r.tolist(),
        }


def balance_residual(b, C) -> float:
    """Scaled detailed-balance defect ``max |C_i b_ij - C_j b_ji|``.

    The defect is divided by ``(1 + max|b|) * max(C)`` so that it does not
    depend on the scale of ``C``.
    """
    b = np.asarray(b, dtype=float)
    C = np.asarray(C, dtype=float)
    m = C[:, None] * b
    scale = (1.0 + np.max(np.abs(b), initial=0.0)) * np.max(C)
    return float(np.max(np.abs(m - m.T), initial=0.0) / scale)


def find_balancing_constants(b, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Positive ``C`` with ``C_i b_ij = C_j b_ji``, normalized to ``C[0] = 1``.

    Ratios are propagated along a breadth-first spanning forest of the graph
    with an edge ``(i, j)`` whenever ``b_ij b_ji > 0``; every remaining edge
    is then checked for cycle consistency. Each connected component is
    scaled so its lowest-index species has ``C = 1``.

    Raises
    ------
    NoBalancing
        If the zero pattern of ``b`` is not symmetric, or a cycle of ratios
        is inconsistent. ``witness`` holds the offending pair.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"b must be square, got shape {b.shape}")
    if np.any(b < 0) or not np.all(np.isfinite(b)):
        raise ValueError("b must be finite and entrywise nonnegative")
    n = b.shape[0]
    pos = b > 0
    asym = pos != pos.T
    if np.any(asym):
        i, j = (int(k) for k in np.argwhere(asym)[0])
        raise NoBalancing(
            f"b[{i}][{j}]={b[i, j]} and b[{j}][{i}]={b[j, i]}: one is zero, the other is not",
            witness=(i, j),
        )

    C = np.zeros(n)
    bscale = 1.0 + b.max(initial=0.0)
    for root in range(n):
        if C[root] > 0:
            continue
        C[root] = 1.0
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(pos[i]):
                if j == i:
                    continue
                if C[j] == 0:
                    C[j] = C[i] * b[i, j] / b[j, i]
                    queue.append(j)
                elif abs(C[i] * b[i, j] - C[j] * b[j, i]) > tol * bscale * max(C[i], C[j]):
                    raise NoBalancing(
                        f"inconsistent cycle through edge ({i}, {j}): "
                        f"C_i b_ij = {C[i] * b[i, j]!r} but C_j b_ji = {C[j] * b[j, i]!r}",
                        witness=(int(i), int(j)),
                    )
    return C


def is_positive_definite(m, tol: float = SYMMETRY_TOL):
    """Return ``(is_pd, smallest_eigenvalue)`` for a symmetric matrix.

    Positive definite means the smallest eigenvalue exceeds
    ``1e-12 * (1 + max |eigenvalue|)``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"m must be square, got shape {m.shape}")
    scale = 1.0 + np.max(np.abs(m), initial=0.0)
    if np.max(np.abs(m - m.T), initial=0.0) > tol * scale:
        raise NotSymmetric("matrix is not symmetric")
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))
    lam_min = float(lam[0]) if lam.size else np.inf
    lam_max = float(np.max(np.abs(lam), initial=0.0))
    return lam_min > PD_RTOL * (1.0 + lam_max), lam_min


def embed_lotka_volterra(model: LotkaVolterraModel, C=None) -> EmbeddingResult:
    """Rewrite a symmetrizable Lotka-Volterra system as a generalized model.

    If ``C`` is omitted, ``model.C`` is used, or failing that the constants
    from :func:`find_balancing_constants`.
    The returned model uses unit node weights, so that
    ``sum_a K_ia (sum_j B_ja n_j) = sum_j b_ij n_j`` holds exactly.

    Raises
    ------
    NotBalanced
        ``diag(C) @ b`` is not symmetric.
    NotPositiveDefinite
        ``diag(C) @ b`` has a non-positive eigenvalue (reported).
    """
    b = model.b
    if C is None:
        C = model.C if model.C is not None else find_balancing_constants(b)
    C = np.asarray(C, dtype=float)
    if C.shape != (model.N,) or np.any(C <= 0):
        raise ValueError("C must be a positive vector of length N")
    if balance_residual(b, C) > SYMMETRY_TOL:
        raise NotBalanced(f"diag(C) b is not symmetric (defect {balance_residual(b, C):.3e})")

    m = C[:, None] * b
    m = 0.5 * (m + m.T)
    lam, U = np.linalg.eigh(m)
    order = np.argsort(lam)[::-1]
    lam, U = lam[order], U[:, order]
    lam_max = float(np.max(np.abs(lam), initial=0.0))
    if lam[-1] <= PD_RTOL * (1.0 + lam_max):
        raise NotPositiveDefinite(
            f"diag(C) b is not positive definite (smallest eigenvalue {lam[-1]:.6g})",
            eigenvalue=float(lam[-1]),
        )
    B = U * np.sqrt(lam)[None, :]
    K = B / C[:, None]
    embedded = GeneralizedModel(model.r, K, B, DiscreteMeasure(np.ones(model.N)), C, Identity())
    m.setflags(write=False)
    return EmbeddingResult(embedded, lam, U, m, C)


def lotka_volterra_to_generalized(model: LotkaVolterraModel, C=None) -> GeneralizedModel:
    return embed_lotka_volterra(model, C).model


def to_generalized(model) -> GeneralizedModel:
    """Generalized form of any supported model."""
    from .models import ResourceModel, resource_to_generalized

    if isinstance(model, GeneralizedModel):
        return model
    if isinstance(model, LotkaVolterraModel):
        return embed_lotka_volterra(model).model
    if isinstance(model, ResourceModel):
        return resource_to_generalized(model)
    raise TypeError(f"unsupported model type {type(model).__name__}")
