"""JSON formats for matrices, vectors, functions and reports."""

from __future__ import annotations

import json
import sys

import numpy as np

from .errors import InvalidSpec
from .estimates import jsonable
from .funcs import function_from_dict
from .linalg import AmbientSpace, as_matrix


def _complex_list(entries):
    try:
        return np.array([complex(float(re), float(im)) for re, im in entries], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"entries must be [re, im] pairs: {exc}") from exc


def matrix_from_dict(data: dict) -> tuple[np.ndarray, AmbientSpace]:
    """``{"dim": d, "entries": [[re, im], ...]}`` row-major, or an operator
    spec ``{"kind": ..., ...}``.  An optional ``"ambient"`` key selects the
    space (``"hilbert"`` or ``"lp:<p>"``)."""
    if not isinstance(data, dict):
        raise InvalidSpec("matrix description must be a JSON object")
    if "kind" in data:
        from .zoo import build

        return build(data)
    try:
        d = int(data["dim"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed matrix description: {exc}") from exc
    vals = _complex_list(entries)
    if d < 1 or vals.size != d * d:
        raise InvalidSpec(f"expected {d * d} entries, got {vals.size}")
    T = as_matrix(vals.reshape(d, d))
    return T, AmbientSpace.parse(data.get("ambient", "hilbert"), d)


def matrix_to_dict(T) -> dict:
    A = np.asarray(T, dtype=complex)
    return {"dim": int(A.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in A.ravel()]}


def vector_from_dict(data: dict) -> np.ndarray:
    try:
        d = int(data["dim"])
        vals = _complex_list(data["entries"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed vector description: {exc}") from exc
    if vals.size != d:
        raise InvalidSpec(f"expected {d} entries, got {vals.size}")
    return vals


def vector_to_dict(x) -> dict:
    v = np.asarray(x, dtype=complex)
    return {"dim": int(v.size), "entries": [[float(z.real), float(z.imag)] for z in v]}


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"{path}: invalid JSON ({exc})") from exc


def load_matrix(path):
    return matrix_from_dict(load_json(path))


def load_function(path):
    return function_from_dict(load_json(path))


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj, path=None) -> None:
    text = dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
