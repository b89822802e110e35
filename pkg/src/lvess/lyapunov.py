"""Lyapunov functional of the generalized model.

``F(n) = sum_m w_m H(x_m) - sum_i C_i r_i n_i`` with ``x = n @ B`` and
``H`` the antiderivative of ``L`` vanishing at 0 (so ``F(0) = 0``).
Along solutions ``dF/dt = -sum_i C_i n_i g_i(n)^2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError
from .models import GeneralizedModel, _growth, as_state


@dataclass(frozen=True)
class LyapunovEvaluation:
    value: float
    gradient: np.ndarray
    dissipation: float


def _finite(x, what):
    if not np.all(np.isfinite(x)):
        raise EvaluationError(f"non-finite {what}")
    return x


def _value(model: GeneralizedModel, n):
    x = model.environment(n)
    f = model.weights @ model.response.antiderivative(x) - np.dot(model.C * model.r, n)
    return float(_finite(f, "Lyapunov value"))


def _gradient(model: GeneralizedModel, n):
    x = model.environment(n)
    grad = model.B @ (model.weights * model.response.value(x)) - model.C * model.r
    return _finite(grad, "Lyapunov gradient")


def _hessian(model: GeneralizedModel, n):
    x = model.environment(n)
    d = model.weights * model.response.derivative(x)
    hess = (model.B * d[None, :]) @ model.B.T
    return _finite(0.5 * (hess + hess.T), "Lyapunov Hessian")


def _dissipation(model: GeneralizedModel, n):
    g = _growth(model, n)
    return float(_finite(-np.sum(model.C * n * g * g), "dissipation"))


def lyapunov_value(model: GeneralizedModel, n) -> float:
    return _value(model, as_state(n, model.N))


def lyapunov_gradient(model: GeneralizedModel, n) -> np.ndarray:
    """Gradient of ``F``; equals ``-C * growth_rates(model, n)``."""
    return _gradient(model, as_state(n, model.N))


def lyapunov_hessian(model: GeneralizedModel, n) -> np.ndarray:
    """Hessian ``sum_m w_m L'(x_m) B[:, m] B[:, m]^T``, positive semidefinite."""
    return _hessian(model, as_state(n, model.N))


def lyapunov_dissipation(model: GeneralizedModel, n) -> float:
    """Time derivative of ``F`` along the flow at state ``n`` (always <= 0)."""
    return _dissipation(model, as_state(n, model.N))


def evaluate(model: GeneralizedModel, n) -> LyapunovEvaluation:
    n = as_state(n, model.N)
    return LyapunovEvaluation(_value(model, n), _gradient(model, n), _dissipation(model, n))
