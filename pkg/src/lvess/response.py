"""Competition response functions.

A response ``L`` maps the aggregated environment state ``x = sum_j B_j n_j``
to a per-unit competitive pressure. Each response carries its derivative,
its antiderivative ``H`` (normalized so that ``H(0) = 0``) and its limit at
``+inf``; the Lyapunov functional needs all of them in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class ResponseFunction:
    """Interface shared by all responses.

    Subclasses implement :meth:`value`, :meth:`derivative`,
    :meth:`antiderivative` and :attr:`limit_at_infinity`. All methods accept
    scalars or arrays and evaluate elementwise.
    """

    family = "abstract"
    #: whether evaluation at negative arguments is well defined, which is
    #: what lets kernels carry signs (eigenvector embeddings)
    accepts_negative = False

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def antiderivative(self, x):
        raise NotImplementedError

    @property
    def limit_at_infinity(self) -> float:
        raise NotImplementedError

    @property
    def at_zero(self) -> float:
        return float(self.value(0.0))

    def is_strictly_increasing(self) -> bool:
        return True

    def to_dict(self) -> dict:
        raise TypeError(f"{type(self).__name__} cannot be serialized")

    def __call__(self, x):
        return self.value(x)


@dataclass(frozen=True)
class Identity(ResponseFunction):
    """``L(x) = x``; the Lotka-Volterra case."""

    family = "identity"
    accepts_negative = True

    def value(self, x):
        return np.asarray(x, dtype=float) * 1.0

    def derivative(self, x):
        return np.ones_like(np.asarray(x, dtype=float))

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * x * x

    @property
    def limit_at_infinity(self) -> float:
        return math.inf

    def to_dict(self) -> dict:
        return {"family": "identity"}


@dataclass(frozen=True)
class Saturating(ResponseFunction):
    """Holling type II response ``L(x) = s x / (1 + x)``.

    Parameters
    ----------
    scale : float
        Saturation level ``s > 0``; also the limit at infinity.
    """

    scale: float = 1.0
    family = "saturating"

    def __post_init__(self):
        s = float(self.scale)
        if not (math.isfinite(s) and s > 0):
            raise ValueError(f"saturating scale must be finite and > 0, got {self.scale!r}")
        object.__setattr__(self, "scale", s)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.scale * x / (1.0 + x)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return self.scale / (1.0 + x) ** 2

    def antiderivative(self, x):
        # s * (x - log(1 + x)); series near 0 avoids cancellation
        x = np.asarray(x, dtype=float)
        small = np.abs(x) < 0.1
        xs = np.where(small, x, 0.0)
        # x - log1p(x) = sum_{k>=2} (-1)^k x^k / k, truncated below 0.1**20
        series = np.zeros_like(xs)
        for k in range(20, 1, -1):
            series = xs * ((-1.0) ** k / k + series)
        series = xs * series
        xl = np.where(small, 0.0, x)
        direct = xl - np.log1p(xl)
        return self.scale * np.where(small, series, direct)

    @property
    def limit_at_infinity(self) -> float:
        return self.scale

    def to_dict(self) -> dict:
        return {"family": "saturating", "scale": self.scale}


@dataclass(frozen=True)
class CustomResponse(ResponseFunction):
    """User-supplied response triple.

    ``antiderivative`` must satisfy ``H(0) = 0`` and ``H' = L`` exactly;
    nothing here differentiates or integrates symbolically. Monotonicity is
    checked by sampling ``derivative`` on ``[0, 100]`` unless
    ``strictly_increasing`` is given.
    """

    fn: Callable = field(repr=False)
    dfn: Callable = field(repr=False)
    antiderivative_fn: Callable = field(repr=False)
    limit: float = math.inf
    strictly_increasing: bool | None = None
    name: str = "custom"
    family = "custom"

    def value(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def derivative(self, x):
        return np.asarray(self.dfn(np.asarray(x, dtype=float)), dtype=float)

    def antiderivative(self, x):
        return np.asarray(self.antiderivative_fn(np.asarray(x, dtype=float)), dtype=float)

    @property
    def limit_at_infinity(self) -> float:
        return float(self.limit)

    def is_strictly_increasing(self) -> bool:
        if self.strictly_increasing is not None:
            return bool(self.strictly_increasing)
        grid = np.concatenate([[0.0], np.logspace(-6, 2, 161)])
        return bool(np.all(self.derivative(grid) > 0))


def response_from_dict(data: dict) -> ResponseFunction:
    """Build a response from its JSON form (``{"family": ...}``)."""
    family = data.get("family")
    if family == "identity":
        return Identity()
    if family == "saturating":
        if "scale" not in data:
            raise KeyError("scale")
        return Saturating(float(data["scale"]))
    raise ValueError(f"unknown response family {family!r}")
