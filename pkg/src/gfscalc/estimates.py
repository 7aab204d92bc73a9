"""Measured constants with witness data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

#: Allowed values for :attr:`ConstantEstimate.bound_side`.
BOUND_SIDES = ("lower", "upper", "two_sided")


@dataclass
class ConstantEstimate:
    """A numerically measured constant.

    ``bound_side`` says how the value relates to the true constant:
    ``"lower"`` for supremum estimates over sampled candidates, ``"upper"``
    for certified majorants and ``"two_sided"`` when the value is exact up to
    the reported tolerance.
    """

    value: float
    kind: str
    bound_side: str = "lower"
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    converged: bool = True
    flags: list[str] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.bound_side not in BOUND_SIDES:
            raise ValueError(f"bound_side must be one of {BOUND_SIDES}")

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": float(self.value),
            "kind": self.kind,
            "bound_side": self.bound_side,
            "converged": bool(self.converged),
            "flags": list(self.flags),
            "witnesses": [jsonable(w) for w in self.witnesses],
            "meta": jsonable(self.meta),
        }


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex numbers for JSON.

    Complex numbers become ``[re, im]``; non-finite floats become ``None``.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_finite(obj.real), _finite(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return obj


def _finite(x):
    """Floats for strict JSON: infinities and NaN become ``None``."""
    x = float(x)
    return x if np.isfinite(x) else None


def classify_growth(values, diverge_ratio: float = 2.0, bounded_ratio: float = 1.1) -> dict:
    """Growth status of estimates taken at shrinking grid floors.

    ``values[i]`` is the estimate whose grid floor is ten times smaller than
    that of ``values[i-1]``.  The sequence is ``"diverging"`` when some step
    grows by at least ``diverge_ratio``, ``"bounded"`` when every step grows
    by at most ``bounded_ratio`` and ``"indeterminate"`` otherwise.
    """
    v = [float(x) for x in values]
    ratios = [b / a if a > 0 else float("inf") for a, b in zip(v[:-1], v[1:])]
    if any(q >= diverge_ratio for q in ratios):
        status = "diverging"
    elif all(q <= bounded_ratio for q in ratios):
        status = "bounded"
    else:
        status = "indeterminate"
    return {"values": v, "ratios": ratios, "status": status}


def growth_from_profile(profile, r_mins) -> dict:
    """Apply :func:`classify_growth` to a per-radius profile.

    ``profile`` holds ``(r, value)`` pairs; the estimate for floor ``s`` is
    the largest value over radii with ``r - 1 >= s``.
    """
    vals = []
    for s in r_mins:
        sel = [v for r, v in profile if r - 1.0 >= s * (1.0 - 1e-9)]
        vals.append(max(sel) if sel else 0.0)
    out = classify_growth(vals)
    out["r_mins"] = [float(s) for s in r_mins]
    return out
