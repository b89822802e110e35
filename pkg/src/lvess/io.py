"""JSON model files.

A model file is an object with a ``kind`` field:

``{"kind": "lotka_volterra", "r": [...], "b": [[...], ...], "C": [...]}``
    ``C`` is optional; when missing it is found by detailed balance.
``{"kind": "resource", "d": [...], "eta": [[...], ...], "I0": [...]}``
    ``eta`` is indexed ``[resource][species]``.
``{"kind": "generalized", "r": [...], "K": [[...]], "B": [[...]], "weights": [...],
"C": [...], "response": {"family": "identity"}}``
    ``response`` may also be ``{"family": "saturating", "scale": s}``.
    ``B`` is optional and defaults to ``diag(C) K``.

Matrices are row-major arrays of arrays. Floats are written with ``repr``,
which round-trips doubles exactly.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvariantError, ParseError
from .models import DiscreteMeasure, GeneralizedModel, LotkaVolterraModel, ResourceModel
from .response import response_from_dict

KINDS = ("lotka_volterra", "resource", "generalized")


def _numbers(data, key, ndim, required=True):
    if key not in data:
        if required:
            raise ParseError("missing field", field=key)
        return None
    value = data[key]
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected numbers", field=key) from None
    if arr.ndim != ndim or (ndim == 2 and arr.shape[1] == 0 and arr.shape[0] > 0):
        shape = "a list of numbers" if ndim == 1 else "a list of equal-length rows"
        raise ParseError(f"expected {shape}", field=key)
    return arr


def model_from_dict(data: dict):
    """Build a model from a decoded JSON object.

    Raises ``ParseError`` on malformed structure and ``InvariantError`` on
    structurally valid data that violates a model invariant.
    """
    if not isinstance(data, dict):
        raise ParseError("model file must contain a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}, got {kind!r}", field="kind")
    if kind == "lotka_volterra":
        return LotkaVolterraModel(_numbers(data, "r", 1), _numbers(data, "b", 2),
                                  _numbers(data, "C", 1, required=False))
    if kind == "resource":
        return ResourceModel(_numbers(data, "d", 1), _numbers(data, "eta", 2), _numbers(data, "I0", 1))

    r = _numbers(data, "r", 1)
    K = _numbers(data, "K", 2)
    weights = _numbers(data, "weights", 1)
    C = _numbers(data, "C", 1, required=False)
    if C is None:
        C = np.ones(r.size)
    B = _numbers(data, "B", 2, required=False)
    try:
        response = response_from_dict(data.get("response", {"family": "identity"}))
    except (KeyError, ValueError, TypeError, AttributeError) as exc:
        raise ParseError(f"bad response: {exc}", field="response") from None
    if B is None:
        if K.shape[0] != C.size:
            raise InvariantError(f"C has length {C.size}, K has {K.shape[0]} rows")
        B = C[:, None] * K
    return GeneralizedModel(r, K, B, DiscreteMeasure(weights), C, response)


def model_to_dict(model) -> dict:
    if isinstance(model, LotkaVolterraModel):
        out = {"kind": "lotka_volterra", "r": model.r.tolist(), "b": model.b.tolist()}
        if model.C is not None:
            out["C"] = model.C.tolist()
        return out
    if isinstance(model, ResourceModel):
        return {"kind": "resource", "d": model.d.tolist(), "eta": model.eta.tolist(),
                "I0": model.I0.tolist()}
    if isinstance(model, GeneralizedModel):
        return {"kind": "generalized", "r": model.r.tolist(), "K": model.K.tolist(),
                "B": model.B.tolist(), "weights": model.weights.tolist(), "C": model.C.tolist(),
                "response": model.response.to_dict()}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    return model_from_dict(data)


def dumps(model) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def load_model(path):
    return loads(Path(path).read_text(encoding="utf-8"))


def save_model(model, path) -> None:
    Path(path).write_text(dumps(model) + "\n", encoding="utf-8")
