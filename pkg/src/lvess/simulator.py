"""Positivity-preserving integration of the generalized model.

Species present at ``t = 0`` are integrated in log coordinates
``u_i = log n_i`` (``du_i/dt = g_i(exp u)``), so they stay strictly positive;
absent species stay exactly zero. Time stepping uses the Dormand-Prince
5(4) pair with a PI step-size controller.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import MaxStepsExceeded, NonFiniteState, StepUnderflow
from .lyapunov import _dissipation, _value
from .models import GeneralizedModel, _growth, as_state

LOG_FLOOR = 1e-300

# Dormand-Prince 5(4) tableau
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

# PI controller (Gustafsson); exponents as in Hairer & Wanner's DOPRI5
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA
_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0
# cap on h * (stiffness estimate); the pair's stability function is 0.565 at
# -3.0 but 0.988 at its real-axis boundary near -3.3, where the controller
# would otherwise park and leave a tolerance-sized offset from equilibria
_STABLE_HRHO = 3.0


@dataclass(frozen=True)
class SimOptions:
    t_end: float = 100.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_steps: int = 1_000_000
    record_stride: int = 1
    convergence_window: float = 10.0
    convergence_tol: float = 1e-9
    #: stop early once convergence is detected
    stop_on_convergence: bool = True
    #: "raise" or "return" when max_steps is hit
    on_max_steps: str = "raise"

    def __post_init__(self):
        for name in ("t_end", "rel_tol", "abs_tol", "convergence_window", "convergence_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_steps < 1 or self.record_stride < 1:
            raise ValueError("max_steps and record_stride must be >= 1")
        if self.on_max_steps not in ("raise", "return"):
            raise ValueError("on_max_steps must be 'raise' or 'return'")


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    F_values: np.ndarray
    dissipation: np.ndarray
    terminated_by: str
    steps: int = 0
    rejected: int = 0

    @property
    def terminal_state(self) -> np.ndarray:
        return self.states[-1]

    def summary(self) -> dict:
        return {
            "terminated_by": self.terminated_by,
            "t_final": float(self.times[-1]),
            "terminal_state": self.states[-1].tolist(),
            "terminal_F": float(self.F_values[-1]),
            "accepted_steps": self.steps,
            "rejected_steps": self.rejected,
        }


class MonotonicityReport(NamedTuple):
    passed: bool
    worst_violation: float
    index: int | None


class ConvergenceCheck(NamedTuple):
    converged: bool
    error: float


def _initial_step(rhs, u, f0, rtol, atol, t_span):
    # Hairer, Norsett & Wanner, starting step size selection
    scale = atol + rtol * np.abs(u)
    d0 = np.sqrt(np.mean((u / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, t_span)
    f1 = rhs(u + h0 * f0)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, t_span)


def simulate(model: GeneralizedModel, n0, opts: SimOptions | None = None, **kwargs) -> Trajectory:
    """Integrate ``dn_i/dt = g_i(n) n_i`` from ``n0`` up to ``opts.t_end``.

    Keyword arguments override fields of ``opts``. The state, ``F`` and
    ``dF/dt`` are recorded every ``record_stride`` accepted steps and at
    the final time.

    Integration stops early (``terminated_by="converged"``) once
    ``max_i |g_i n_i| < convergence_tol`` and the state has moved by less
    than ``convergence_tol`` throughout a window of ``convergence_window``
    time units.

    Raises
    ------
    MaxStepsExceeded
        ``max_steps`` accepted steps without reaching ``t_end`` (unless
        ``on_max_steps="return"``).
    StepUnderflow
        Step size fell below the resolution of ``t``.
    NonFiniteState
        The state overflowed.
    """
    opts = replace(opts or SimOptions(), **kwargs)
    n0 = as_state(n0, model.N, "n0")
    tiny = (n0 > 0) & (n0 < LOG_FLOOR)
    if np.any(tiny):
        warnings.warn(f"species {np.flatnonzero(tiny).tolist()} start below {LOG_FLOOR:g}; "
                      "treated as extinct", RuntimeWarning, stacklevel=2)
    alive = n0 >= LOG_FLOOR
    idx = np.flatnonzero(alive)
    N = model.N

    def state(u):
        n = np.zeros(N)
        n[idx] = np.exp(u)
        return n

    def rhs(u):
        return _growth(model, state(u))[idx]

    t = 0.0
    u = np.log(n0[idx])
    n = state(u)
    times, states = [t], [n]
    F, D = [_value(model, n)], [_dissipation(model, n)]

    def record(t, n):
        times.append(t)
        states.append(n)
        F.append(_value(model, n))
        D.append(_dissipation(model, n))

    def finish(how, steps, rejected):
        return Trajectory(np.array(times), np.array(states), np.array(F), np.array(D), how,
                          steps, rejected)

    if idx.size == 0:
        record(opts.t_end, n)
        return finish("t_end", 0, 0)

    rtol, atol = opts.rel_tol, opts.abs_tol
    k0 = rhs(u)
    h = _initial_step(rhs, u, k0, rtol, atol, opts.t_end)
    err_old = 1e-4
    steps = rejected = 0
    window_start, window_ref = None, None
    last_recorded = 0

    while t < opts.t_end:
        if steps >= opts.max_steps:
            if last_recorded != steps:
                record(t, n)
            traj = finish("max_steps", steps, rejected)
            if opts.on_max_steps == "return":
                return traj
            raise MaxStepsExceeded(f"{opts.max_steps} steps taken, reached t = {t:.6g}", traj)
        h = min(h, opts.t_end - t)
        if h <= 16 * np.finfo(float).eps * max(1.0, abs(t)):
            raise StepUnderflow(f"step size {h:.3e} underflows at t = {t:.6g}", t, n)

        k, args = [k0], [u]
        for s in range(1, 7):
            args.append(u + h * sum(a * ks for a, ks in zip(_A[s], k)))
            k.append(rhs(args[-1]))
        u_new = args[6]  # last stage sits at the 5th-order solution (FSAL)
        if not np.all(np.isfinite(u_new)) or not np.all(np.isfinite(k[6])):
            if h > 1e-3 * max(1.0, t):
                h *= 0.25
                rejected += 1
                continue
            raise NonFiniteState(f"non-finite state at t = {t:.6g}", t, n)
        err_vec = h * sum(e * ks for e, ks in zip(_E, k))
        scale = atol + rtol * np.maximum(np.abs(u), np.abs(u_new))
        err = max(np.sqrt(np.mean((err_vec / scale) ** 2)), 1e-16)

        if err <= 1.0:
            fac = err ** _ALPHA / err_old ** _BETA / _SAFETY
            h_next = h / min(1 / _FAC_MIN, max(1 / _FAC_MAX, fac))
            # stages 6 and 7 share c = 1: their slope difference estimates
            # the spectral radius of the Jacobian
            du = np.linalg.norm(u_new - args[5])
            if du > 0:
                rho = np.linalg.norm(k[6] - k[5]) / du
                if rho > 0:
                    h_next = min(h_next, _STABLE_HRHO / rho)
            err_old = max(err, 1e-4)
            t = t + h if opts.t_end - (t + h) > 16 * np.finfo(float).eps * opts.t_end else opts.t_end
            u, k0 = u_new, k[6]
            n = state(u)
            if not np.all(np.isfinite(n)):
                raise NonFiniteState(f"state overflowed at t = {t:.6g}", t, n)
            steps += 1
            if steps % opts.record_stride == 0:
                record(t, n)
                last_recorded = steps

            flux = np.max(np.abs(k0 * n[idx]))
            if flux < opts.convergence_tol:
                if window_start is None:
                    window_start, window_ref = t, n
                elif np.max(np.abs(n - window_ref)) >= opts.convergence_tol:
                    window_start, window_ref = t, n
                elif t - window_start >= opts.convergence_window and opts.stop_on_convergence:
                    if last_recorded != steps:
                        record(t, n)
                    return finish("converged", steps, rejected)
            else:
                window_start = None
            h = h_next
        else:
            rejected += 1
            h = h / min(1 / _FAC_MIN, err ** _ALPHA / _SAFETY)

    if last_recorded != steps:
        record(t, n)
    return finish("t_end", steps, rejected)


def check_lyapunov_monotone(traj: Trajectory, slack: float = 1e-9) -> MonotonicityReport:
    """``F`` must not increase by more than ``slack * (1 + |F|)`` between records.

    ``worst_violation`` is the largest relative increase seen (0 if ``F``
    never increases); ``index`` points at the first offending record.
    """
    F = np.asarray(traj.F_values, dtype=float)
    if F.size == 0:
        raise ValueError("empty trajectory")
    rel = (F[1:] - F[:-1]) / (1.0 + np.abs(F[:-1]))
    worst = float(max(np.max(rel, initial=0.0), 0.0))
    bad = np.flatnonzero(rel > slack)
    return MonotonicityReport(bad.size == 0, worst, int(bad[0]) + 1 if bad.size else None)


def detect_convergence(traj: Trajectory, target, tol: float) -> ConvergenceCheck:
    target = np.asarray(target, dtype=float)
    if target.shape != traj.states[-1].shape:
        raise ValueError(f"target has shape {target.shape}, expected {traj.states[-1].shape}")
    err = float(np.max(np.abs(traj.states[-1] - target), initial=0.0))
    return ConvergenceCheck(err <= tol, err)
