"""Checks of the convergence hypotheses on a concrete model.

Four hypotheses guarantee global convergence to a unique ESS:

(i)   strict competition -- ``L`` strictly increasing and every species is
      eventually limited by its own density;
(ii)  symmetry -- ``B = diag(C) K`` with ``C > 0``;
(iii) non-extinction -- every species grows when alone at low density;
(iv)  non-degeneracy -- at most one stationary state per support.

(ii) is enforced when a :class:`~lvess.models.GeneralizedModel` is built.
(iv) has no general decision procedure; it is reported as
``verified-heuristically`` when every stationary state found by subset
enumeration has a nonsingular restricted Jacobian, ``unverified`` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import GeneralizedModel


@dataclass(frozen=True, eq=False)
class HypothesisCheck:
    passed: bool
    margins: np.ndarray = field(default_factory=lambda: np.zeros(0))
    violating: tuple = ()
    detail: str = ""

    def to_dict(self) -> dict:
        margins = [m if np.isfinite(m) else ("inf" if m > 0 else "-inf") for m in self.margins.tolist()]
        return {"passed": self.passed, "margins": margins,
                "violating": list(self.violating), "detail": self.detail}


@dataclass(frozen=True)
class DegeneracyCheck:
    verdict: str  # "verified-heuristically" or "unverified"
    explanation: str

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "explanation": self.explanation}


@dataclass(frozen=True)
class AssumptionReport:
    strict_competition: HypothesisCheck
    symmetry: HypothesisCheck
    non_extinction: HypothesisCheck
    non_degeneracy: DegeneracyCheck

    @property
    def ok(self) -> bool:
        """Whether (i), (ii) and (iii) all hold."""
        return (self.strict_competition.passed and self.symmetry.passed
                and self.non_extinction.passed)

    def to_dict(self) -> dict:
        return {
            "i_strict_competition": self.strict_competition.to_dict(),
            "ii_symmetry": self.symmetry.to_dict(),
            "iii_non_extinction": self.non_extinction.to_dict(),
            "iv_non_degeneracy": self.non_degeneracy.to_dict(),
            "ok": self.ok,
        }


def saturation_capacity(model: GeneralizedModel) -> np.ndarray:
    """``lim_{x -> inf} sum_m w_m K_im L(B_im x)`` for each species ``i``.

    For nonnegative kernels this is ``L(inf) * sum_m w_m K_im``. With the
    identity response and signed kernels every nonzero term
    ``K_im B_im x = C_i K_im^2 x`` diverges, so the capacity is infinite as
    soon as row ``i`` of ``K`` carries weight.
    """
    w = model.weights[None, :]
    live = (w > 0) & (model.K != 0)
    linf = model.response.limit_at_infinity
    if np.isinf(linf):
        return np.where(np.any(live, axis=1), np.inf, 0.0)
    return np.sum(np.where(live, w * np.abs(model.K) * linf, 0.0), axis=1)


def strict_competition(model: GeneralizedModel):
    """Return ``(passed, margins)`` with ``margins = capacity - r`` (must be > 0)."""
    with np.errstate(invalid="ignore"):
        margins = saturation_capacity(model) - model.r
    passed = model.response.is_strictly_increasing() and bool(np.all(margins > 0))
    return passed, margins


def non_extinction(model: GeneralizedModel):
    """Return ``(passed, margins)`` with ``margins = r - sum_m w_m K_im L(0)`` (must be > 0)."""
    pressure = model.K @ (model.weights * model.response.value(np.zeros(model.M)))
    margins = model.r - pressure
    return bool(np.all(margins > 0)), margins


def _non_degeneracy(model, max_support_dim, tol):
    from .equilibrium import enumerate_stationary_points
    from .errors import TooManySubsets

    try:
        points = enumerate_stationary_points(model, tol=tol, max_support_dim=max_support_dim)
    except TooManySubsets as exc:
        return DegeneracyCheck("unverified", str(exc))
    singular = [p.support for p in points if not p.restricted_jacobian_nonsingular]
    if singular:
        return DegeneracyCheck(
            "unverified",
            f"restricted Jacobian is singular on supports {[list(s) for s in singular]}",
        )
    n_ess = sum(p.is_ess for p in points)
    if n_ess > 1:
        return DegeneracyCheck("unverified", f"{n_ess} distinct ESS candidates found")
    return DegeneracyCheck(
        "verified-heuristically",
        f"{len(points)} stationary states over {2 ** model.N} supports, "
        "each with nonsingular restricted Jacobian",
    )


def check_assumptions(model: GeneralizedModel, max_support_dim: int = 12,
                      tol: float = 1e-10) -> AssumptionReport:
    """Evaluate hypotheses (i)-(iv); failures are reported, never raised."""
    ok, margins = strict_competition(model)
    increasing = model.response.is_strictly_increasing()
    detail = f"L({model.response.family}) strictly increasing: {increasing}; L(inf) = {model.response.limit_at_infinity}"
    strict = HypothesisCheck(ok, margins, tuple(int(i) for i in np.flatnonzero(~(margins > 0))), detail)

    sym = HypothesisCheck(True, np.zeros(0), (),
                          "B = diag(C) K enforced at construction; C = "
                          + np.array2string(model.C, precision=6))

    ok, margins = non_extinction(model)
    extinct = HypothesisCheck(ok, margins, tuple(int(i) for i in np.flatnonzero(~(margins > 0))),
                              f"L(0) = {model.response.at_zero}")
    return AssumptionReport(strict, sym, extinct, _non_degeneracy(model, max_support_dim, tol))
