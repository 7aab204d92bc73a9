"""Operator constructors for the standard examples.

All matrices are built from closed forms; ``build`` turns an
:class:`OperatorSpec` (or its JSON dictionary) into a matrix and an ambient
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec
from .linalg import AmbientSpace

KINDS = ("jordan", "diagonal", "cyclic_shift", "truncated_shift", "multiplier",
         "random_contraction", "ritt_diagonal")


def jordan(lam: complex, d: int, allow_outside: bool = False) -> np.ndarray:
    """Jordan block ``lam I + N`` with ones on the superdiagonal."""
    if d < 1:
        raise InvalidSpec("dimension must be positive")
    if abs(lam) > 1 and not allow_outside:
        raise InvalidSpec("|lambda| > 1 needs allow_outside")
    return lam * np.eye(d, dtype=complex) + np.diag(np.ones(d - 1, dtype=complex), 1)


def diagonal(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1 or v.size == 0 or not np.all(np.isfinite(v)):
        raise InvalidSpec("diagonal needs a nonempty list of finite values")
    return np.diag(v)


def cyclic_shift(d: int) -> np.ndarray:
    """``(Ux)_j = x_{j+1 mod d}``: an isometry on every ``l^p_d``."""
    if d < 1:
        raise InvalidSpec("dimension must be positive")
    U = np.zeros((d, d), dtype=complex)
    U[np.arange(d), (np.arange(d) + 1) % d] = 1.0
    return U


def truncated_shift(d: int) -> np.ndarray:
    """``(Ux)_j = x_{j+1}`` for ``j < d-1`` and 0 at the end (nilpotent)."""
    if d < 1:
        raise InvalidSpec("dimension must be positive")
    return np.diag(np.ones(d - 1, dtype=complex), 1)


def multiplier(values) -> np.ndarray:
    """Diagonal multiplier ``T_m`` with ``|m_j| <= 1``."""
    v = np.asarray(values, dtype=complex)
    if np.any(np.abs(v) > 1 + 1e-15):
        raise InvalidSpec("multiplier entries must satisfy |m| <= 1")
    return diagonal(v)


def random_contraction(d: int, seed: int = 0, scale: float = 1.0) -> np.ndarray:
    """Complex Gaussian matrix with singular values clipped to ``[0, scale]``
    (``scale <= 1``), so spectral radius <= norm <= scale."""
    if not 0 < scale <= 1:
        raise InvalidSpec("scale must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    U, s, Vh = np.linalg.svd(G)
    s = np.minimum(s / s.max() * 1.25, 1.0) * scale
    return (U * s) @ Vh


def ritt_eigenvalues(d: int, angle: float) -> np.ndarray:
    """``1 - t e^{i beta}`` with ``beta`` spread over ``[-angle, angle]`` and
    ``t`` on a grid inside ``(0, min(1, cos beta))``, which keeps every
    eigenvalue inside the open unit disk and in the sector of half-angle
    ``angle`` at 1."""
    if not 0 <= angle < math.pi / 2:
        raise InvalidSpec("angle must lie in [0, pi/2)")
    if d < 1:
        raise InvalidSpec("dimension must be positive")
    beta = np.linspace(-angle, angle, d) if d > 1 else np.zeros(1)
    frac = (np.arange(d) + 1.0) / (d + 1.0)
    t = frac * np.minimum(1.0, np.cos(beta)) * 0.98 + 0.01
    return 1.0 - t * np.exp(1j * beta)


def ritt_diagonal(d: int, angle: float) -> np.ndarray:
    return np.diag(ritt_eigenvalues(d, angle))


def ritt_constant(eigenvalues, grid: int = 20000) -> float:
    """``sup_{|l| > 1} |l - 1| max_j 1/|l - mu_j|`` for a normal operator.

    Each ratio ``(l - 1)/(l - mu_j)`` is holomorphic outside the closed disk
    and tends to 1 at infinity, so by maximum modulus the supremum is taken
    on the unit circle ``l = e^{it}`` (or equals 1).
    """
    mu = np.asarray(eigenvalues, dtype=complex)
    t = 2 * np.pi * (np.arange(grid) + 0.5) / grid
    lam = np.exp(1j * t)
    ratio = np.abs(lam - 1)[:, None] / np.abs(lam[:, None] - mu[None, :])
    return float(max(1.0, ratio.max()))


@dataclass
class OperatorSpec:
    kind: str
    params: dict = field(default_factory=dict)
    ambient: str = "hilbert"

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params, "ambient": self.ambient}

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorSpec":
        data = dict(data)
        if "kind" not in data:
            raise InvalidSpec("operator spec needs a kind")
        kind = data.pop("kind")
        ambient = data.pop("ambient", "hilbert")
        return cls(kind, data, ambient)


def _complex(v):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    return complex(v)


def build(spec) -> tuple[np.ndarray, AmbientSpace]:
    """Matrix and ambient space for an operator spec."""
    if isinstance(spec, dict):
        spec = OperatorSpec.from_dict(spec)
    k, p = spec.kind, spec.params
    try:
        if k == "jordan":
            T = jordan(_complex(p["lambda"]), int(p["d"]), bool(p.get("allow_outside", False)))
        elif k == "diagonal":
            T = diagonal([_complex(v) for v in p["values"]])
        elif k == "cyclic_shift":
            T = cyclic_shift(int(p["d"]))
        elif k == "truncated_shift":
            T = truncated_shift(int(p["d"]))
        elif k == "multiplier":
            T = multiplier([_complex(v) for v in p["values"]])
        elif k == "random_contraction":
            T = random_contraction(int(p["d"]), int(p.get("seed", 0)), float(p.get("scale", 1.0)))
        elif k == "ritt_diagonal":
            T = ritt_diagonal(int(p["d"]), float(p["angle"]))
        else:
            raise InvalidSpec(f"unknown operator kind {k!r}")
    except KeyError as exc:
        raise InvalidSpec(f"operator {k!r} is missing parameter {exc}") from exc
    return T, AmbientSpace.parse(spec.ambient, T.shape[0])


def default_zoo() -> dict[str, OperatorSpec]:
    """Named examples used by the verification harness."""
    return {
        "zero": OperatorSpec("diagonal", {"values": [0.0]}),
        "diag_0.9": OperatorSpec("diagonal", {"values": [0.9]}),
        "diag_pair": OperatorSpec("diagonal", {"values": [0.5, -0.5]}),
        "jordan_1_2": OperatorSpec("jordan", {"lambda": 1.0, "d": 2}),
        "jordan_0.5_2": OperatorSpec("jordan", {"lambda": 0.5, "d": 2}),
        "cyclic_shift_4": OperatorSpec("cyclic_shift", {"d": 4}),
        "truncated_shift_lp_8": OperatorSpec("truncated_shift", {"d": 8}, "lp:1.3333333333333333"),
        "multiplier_lp_4": OperatorSpec("multiplier", {"values": [1.0, -1.0, 0.5, [0.0, 1.0]]},
                                        "lp:1.3333333333333333"),
        "random_contraction_6": OperatorSpec("random_contraction", {"d": 6, "seed": 3, "scale": 0.95}),
        "ritt_diagonal_6": OperatorSpec("ritt_diagonal", {"d": 6, "angle": 0.8}),
    }
