"""Evolutionarily stable states.

The ESS is the unique nonnegative state with zero growth on its support and
nonpositive growth off it. It is also the global minimizer of the convex
Lyapunov functional over the nonnegative orthant, which is how
:func:`solve_ess` finds it. :func:`enumerate_stationary_points` gives an
independent route: it solves ``g_I(n) = 0`` on every support ``I`` and
keeps the positive solutions.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (EvaluationError, HypothesisViolation, NoConvergence, NotStationary,
                     TooManySubsets)
from .lyapunov import _gradient, _hessian, _value
from .models import GeneralizedModel, _growth, as_state

ACTIVE_EPS = 1e-12
NEWTON_REG = 1e-12
ARMIJO = 1e-4
MAX_ENUMERATION_SIZE = 12


@dataclass(frozen=True, eq=False)
class EssResult:
    n: np.ndarray
    support: tuple
    equality_residuals: np.ndarray
    inequality_margins: np.ndarray
    F_value: float
    iterations: int
    method: str = "active_set_newton"

    def to_dict(self) -> dict:
        return {
            "n": self.n.tolist(),
            "support": list(self.support),
            "equality_residuals": self.equality_residuals.tolist(),
            "inequality_margins": self.inequality_margins.tolist(),
            "F_value": self.F_value,
            "iterations": self.iterations,
            "method": self.method,
        }


@dataclass(frozen=True, eq=False)
class StationaryPoint:
    """A stationary state ``n`` with support ``I``.

    ``invasion_rates`` maps each absent species to its growth rate at ``n``;
    a positive rate means that species can invade.
    """

    n: np.ndarray
    support: tuple
    restricted_jacobian_nonsingular: bool
    invasion_rates: dict = field(default_factory=dict)
    is_ess: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.n.tolist(),
            "support": list(self.support),
            "restricted_jacobian_nonsingular": self.restricted_jacobian_nonsingular,
            "invasion_rates": {str(k): v for k, v in self.invasion_rates.items()},
            "is_ess": self.is_ess,
        }


class EssCheck(NamedTuple):
    ok: bool
    residuals: np.ndarray
    margins: np.ndarray
    worst: float


class Stability(NamedTuple):
    tag: str
    invader: int | None
    invasion_rate: float | None


def start_point(model: GeneralizedModel) -> np.ndarray:
    """Scale-aware strictly positive starting state.

    ``n_i = max(r_i, 0) / (sum_m w_m K_im B_im L'(0) + 1)``, clipped to
    ``[1e-6, 1e3]``.
    """
    curvature = (model.K * model.B) @ (model.weights * model.response.derivative(np.zeros(model.M)))
    n0 = np.maximum(model.r, 0.0) / (curvature + 1.0)
    return np.clip(n0, 1e-6, 1e3)


def _basic_hypotheses_hold(model: GeneralizedModel):
    from .assumptions import strict_competition, non_extinction

    failures = []
    ok, margins = strict_competition(model)
    if not ok:
        failures.append(f"(i) strict competition fails for species {np.flatnonzero(margins <= 0).tolist()}")
    ok, margins = non_extinction(model)
    if not ok:
        failures.append(f"(iii) non-extinction fails for species {np.flatnonzero(margins <= 0).tolist()}")
    return failures


def _projected_gradient(x, grad):
    return np.where(x > 0, grad, np.minimum(grad, 0.0))


def _result(model, x, iterations, method):
    x = np.where(x > 0, x, 0.0)
    g = _growth(model, x)
    support = tuple(int(i) for i in np.flatnonzero(x > 0))
    off = np.flatnonzero(x <= 0)
    return EssResult(x, support, np.abs(g[list(support)]), -g[off], _value(model, x), iterations,
                     method)


def solve_ess(model: GeneralizedModel, tol: float = 1e-10, max_iter: int = 500,
              check: bool = True) -> EssResult:
    """Minimize the Lyapunov functional over the nonnegative orthant.

    Projected Newton with active-set updates: variables at zero whose
    gradient points outward are frozen, a Newton step is taken on the rest,
    and the step is projected back onto the orthant with Armijo
    backtracking. When the projected Newton arc fails to decrease ``F`` the
    iteration falls back to a projected gradient step.

    Converges when the projected gradient is below ``tol`` in max norm.

    Raises
    ------
    HypothesisViolation
        If ``check`` and strict competition or non-extinction fails.
    NoConvergence
        After ``max_iter`` iterations; ``best`` holds the last iterate.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if np.all(model.r <= 0):
        warnings.warn("all intrinsic rates are <= 0: non-extinction fails and the ESS is n = 0",
                      RuntimeWarning, stacklevel=2)
        return _result(model, np.zeros(model.N), 0, "active_set_newton")
    if check:
        failures = _basic_hypotheses_hold(model)
        if failures:
            raise HypothesisViolation("; ".join(failures))

    x = start_point(model)
    f = _value(model, x)
    for it in range(max_iter):
        grad = _gradient(model, x)
        if np.max(np.abs(_projected_gradient(x, grad))) <= tol:
            return _result(model, _polish(model, x, tol), it, "active_set_newton")

        free = ~((x <= ACTIVE_EPS) & (grad > 0))
        hess = _hessian(model, x)[np.ix_(free, free)]
        hess[np.diag_indices_from(hess)] += NEWTON_REG
        step = np.zeros_like(x)
        try:
            step[free] = -np.linalg.solve(hess, grad[free])
        except np.linalg.LinAlgError:
            step[free] = -grad[free]

        x_new = _armijo(model, x, f, grad, step)
        if x_new is None:
            x_new = _flat_newton(model, x, f, grad, step)
        if x_new is None:
            x_new = _armijo(model, x, f, grad, -grad)
        if x_new is None:
            # no decrease possible at working precision
            if np.max(np.abs(_projected_gradient(x, grad))) <= 1e3 * tol:
                return _result(model, _polish(model, x, tol), it, "active_set_newton")
            break
        x, f = x_new, _value(model, x_new)
    raise NoConvergence(f"projected Newton did not converge in {max_iter} iterations",
                        best=x, iterations=max_iter)


def _polish(model, x, tol, max_iter=8):
    """Full Newton steps on ``g_I = 0`` over the support of ``x``.

    A small residual does not mean a small error when ``F`` is flat, so
    steps continue while they shrink and the iterate stays inside the
    orthant with a residual still below ``tol``.
    """
    idx = np.flatnonzero(x > 0)
    if idx.size == 0:
        return x
    last = np.inf
    for _ in range(max_iter):
        try:
            g = _growth(model, x)[idx]
            h = _hessian(model, x)[np.ix_(idx, idx)]
            d = np.linalg.solve(h, model.C[idx] * g)
        except (EvaluationError, np.linalg.LinAlgError):
            break
        size = np.max(np.abs(d))
        if not np.isfinite(size) or size >= last:
            break
        trial = x.copy()
        trial[idx] += d
        if np.any(trial[idx] <= 0):
            break
        try:
            if np.max(np.abs(_growth(model, trial)[idx])) > tol:
                break
        except EvaluationError:
            break
        x, last = trial, size
        if size <= 4 * np.finfo(float).eps * np.max(np.abs(x)):
            break
    return x


def _flat_newton(model, x, f, grad, step):
    # F is flat to rounding near the minimizer; accept a full step that
    # does not increase F beyond rounding and improves optimality
    trial = np.maximum(x + step, 0.0)
    try:
        f_trial = _value(model, trial)
        pg_trial = np.max(np.abs(_projected_gradient(trial, _gradient(model, trial))))
    except EvaluationError:
        return None
    if (f_trial <= f + 64 * np.finfo(float).eps * (1.0 + abs(f))
            and pg_trial < np.max(np.abs(_projected_gradient(x, grad)))):
        return trial
    return None


def _armijo(model, x, f, grad, direction, min_alpha=1e-16):
    alpha = 1.0
    while alpha >= min_alpha:
        trial = np.maximum(x + alpha * direction, 0.0)
        moved = trial - x
        if not np.any(moved):
            return None
        try:
            f_trial = _value(model, trial)
        except EvaluationError:
            f_trial = np.inf
        if f_trial <= f + ARMIJO * np.dot(grad, moved) and f_trial <= f:
            return trial
        alpha *= 0.5
    return None


def verify_ess(model: GeneralizedModel, n, tol: float = 1e-9) -> EssCheck:
    """Check the ESS conditions at ``n``.

    Passes iff ``|g_i(n)| <= tol`` wherever ``n_i > 0`` and ``g_i(n) <= tol``
    wherever ``n_i = 0``. ``margins`` are ``-g_i`` off the support.
    """
    n = as_state(n, model.N)
    g = _growth(model, n)
    on = n > 0
    residuals = np.abs(g[on])
    margins = -g[~on]
    worst = max(np.max(residuals, initial=0.0), np.max(-margins, initial=-np.inf), 0.0)
    ok = bool(np.all(residuals <= tol) and np.all(g[~on] <= tol))
    return EssCheck(ok, residuals, margins, float(worst))


def _face_newton(model, support, x0, tol, max_iter=100):
    """Solve ``g_I(n) = 0`` with ``n`` zero off ``I``; ``n_I`` is unconstrained.

    Damped Newton on ``||g_I||``. Returns ``(n, converged, nonsingular)``.
    """
    idx = np.asarray(support, dtype=int)
    n = np.zeros(model.N)
    n[idx] = x0[idx]
    C = model.C[idx]

    def residual(v):
        with np.errstate(all="ignore"):
            return _growth(model, v)[idx]

    def jac_hess(v):
        with np.errstate(all="ignore"):
            return _hessian(model, v)[np.ix_(idx, idx)]

    res = residual(n)
    converged = bool(np.all(np.isfinite(res)) and np.max(np.abs(res)) <= tol)
    for _ in range(max_iter):
        if converged:
            break
        try:
            h = jac_hess(n)
        except EvaluationError:
            return n, False, False
        # J = -diag(1/C) H, so the Newton step solves H d = C * g
        try:
            d = np.linalg.solve(h, C * res)
        except np.linalg.LinAlgError:
            d = np.linalg.lstsq(h, C * res, rcond=None)[0]
        norm0 = np.linalg.norm(res)
        alpha = 1.0
        while alpha > 1e-12:
            trial = n.copy()
            trial[idx] += alpha * d
            r_trial = residual(trial)
            if np.all(np.isfinite(r_trial)) and np.linalg.norm(r_trial) <= (1 - 1e-4 * alpha) * norm0:
                break
            alpha *= 0.5
        else:
            break
        n, res = trial, r_trial
        converged = bool(np.max(np.abs(res)) <= tol)
    if converged and np.all(n[idx] > 0):
        n = _polish(model, n, tol)
    try:
        h = jac_hess(n)
        lam = np.linalg.eigvalsh(h)
        nonsingular = bool(np.all(np.isfinite(lam)) and
                           np.min(np.abs(lam)) > 1e-12 * (1.0 + np.max(np.abs(lam))))
    except (EvaluationError, np.linalg.LinAlgError):
        nonsingular = False
    return n, converged, nonsingular


def enumerate_stationary_points(model: GeneralizedModel, tol: float = 1e-10,
                                max_support_dim: int = MAX_ENUMERATION_SIZE,
                                ess_tol: float = 1e-9) -> list[StationaryPoint]:
    """All stationary states found by solving on every support.

    For each subset ``I`` of species, Newton's method solves ``g_i(n) = 0``
    for ``i`` in ``I`` with the other coordinates held at zero, starting
    from :func:`start_point` restricted to ``I``. Solutions with every
    ``n_i > tol`` on ``I`` are kept. The empty support always yields the
    origin.

    Raises
    ------
    TooManySubsets
        If ``N > max_support_dim``.
    """
    N = model.N
    if N > max_support_dim:
        raise TooManySubsets(f"{N} species means {2 ** N} supports; limit is N <= {max_support_dim}")
    x0 = start_point(model)
    points = []
    for size in range(N + 1):
        for support in itertools.combinations(range(N), size):
            if size == 0:
                n, converged, nonsingular = np.zeros(N), True, True
            else:
                n, converged, nonsingular = _face_newton(model, support, x0, tol)
                if not converged or np.any(n[list(support)] <= tol):
                    continue
            n = np.where(np.isin(np.arange(N), support), n, 0.0)
            g = _growth(model, n)
            rates = {int(j): float(g[j]) for j in range(N) if j not in support}
            points.append(StationaryPoint(n, tuple(support), nonsingular, rates,
                                          verify_ess(model, n, ess_tol).ok))
    return points


def classify_stationary_point(model: GeneralizedModel, point: StationaryPoint,
                              tol: float = 1e-8) -> Stability:
    """Tag a stationary point as ``attracting_ESS`` or ``unstable``.

    A non-ESS stationary point has some absent species with positive growth
    rate; any solution with that species present is pushed away. The
    reported invader is the one with the largest rate.
    """
    n = as_state(point.n, model.N)
    g = _growth(model, n)
    flux = np.abs(g * n)
    if np.max(flux, initial=0.0) > tol:
        raise NotStationary(f"max |g_i n_i| = {np.max(flux):.3e} exceeds {tol:.1e}")
    if point.is_ess:
        return Stability("attracting_ESS", None, None)
    absent = np.flatnonzero(n <= 0)
    if absent.size == 0:
        raise NotStationary("point has full support but is not marked ESS")
    j = int(absent[np.argmax(g[absent])])
    return Stability("unstable", j, float(g[j]))


def find_ess_by_enumeration(model: GeneralizedModel, tol: float = 1e-10,
                            max_support_dim: int = MAX_ENUMERATION_SIZE) -> StationaryPoint:
    """The unique ESS among enumerated stationary points."""
    found = [p for p in enumerate_stationary_points(model, tol, max_support_dim) if p.is_ess]
    if len(found) != 1:
        raise NoConvergence(f"enumeration found {len(found)} ESS candidates, expected exactly one")
    return found[0]
