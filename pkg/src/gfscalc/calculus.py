"""Functional calculus of matrices: Horner, two Riesz-Dunford contour forms
and the radial Besov representation.

For ``phi`` holomorphic on a disk of radius ``r`` and ``spectral_radius(T) <
rho < r``::

    phi^(m)(T) = 1/(2pi) int rho e^{it} phi^(m)(rho e^{it}) R(rho e^{it}, T) dt
               = m!/(2pi) int rho e^{it} phi(rho e^{it}) R(rho e^{it}, T)^{m+1} dt

the second form following from the first by ``m`` integrations by parts.
For ``f`` in the Besov algebra and ``spectral_radius(T) <= 1``::

    <f(T)x, x*> = 1/pi int_1^inf (r^2 - 1) int_0^{2pi} e^{3it}/r^2 f'(e^{it}/r)
                  <R(re^{it}, T)^2 x, x*> dt dr + f(0) <x, x*>
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec, RadiusExceeded
from .funcs import AnalyticFunction, Polynomial, PowerSeriesFunction
from .linalg import as_matrix, matrix_powers, resolvent_stack, spectral_radius
from .quadrature import CircleRule, RadialRule, circle_integral, radial_integral

METHODS = ("direct_horner", "contour_mIPP", "contour_RD", "besov_representation")
CONTOUR_TOL = 1e-13
# resolvents per batched solve, keeps memory bounded
_CHUNK = 2048


@dataclass
class CalculusResult:
    value: np.ndarray | complex
    method: str
    error_estimate: float = 0.0
    converged: bool = True
    flags: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "error_estimate": float(self.error_estimate),
            "converged": bool(self.converged),
            "flags": list(self.flags),
            "meta": self.meta,
        }


def apply_polynomial(P: Polynomial, T) -> np.ndarray:
    """``P(T)`` by Horner's rule in matrix products."""
    A = as_matrix(T)
    d = A.shape[0]
    eye = np.eye(d, dtype=complex)
    c = P.coeffs
    out = c[-1] * eye
    for ck in c[-2::-1]:
        out = out @ A + ck * eye
    return out


def polynomial_stack(coeffs: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Horner evaluation of one polynomial at a stack of matrices."""
    d = mats.shape[-1]
    eye = np.eye(d, dtype=complex)
    out = np.broadcast_to(coeffs[-1] * eye, mats.shape).copy()
    for ck in coeffs[-2::-1]:
        out = out @ mats + ck * eye
    return out


def default_rho(phi: AnalyticFunction, T) -> float:
    """Contour radius ``(spectral_radius + radius)/2``; for entire functions
    the midpoint is replaced by ``max(1.5 sigma, sigma + 0.5)``."""
    sigma = spectral_radius(T)
    if math.isinf(phi.radius):
        return max(1.5 * sigma, sigma + 0.5)
    return 0.5 * (sigma + phi.radius)


def _check_rho(phi, T, rho):
    if not rho < phi.radius:
        raise RadiusExceeded(f"contour radius {rho} must be below the function radius {phi.radius}")
    sigma = spectral_radius(T)
    if not rho > sigma:
        raise InvalidSpec(f"contour radius {rho} must exceed the spectral radius {sigma}")


def _contour(T, rho, weight, power, rule):
    A = as_matrix(T)

    def g(t):
        z = rho * np.exp(1j * t)
        out = np.empty((t.size,) + A.shape, dtype=complex)
        for s in range(0, t.size, _CHUNK):
            R = resolvent_stack(A, z[s:s + _CHUNK])
            out[s:s + _CHUNK] = matrix_powers(R, power) * weight(z[s:s + _CHUNK])[:, None, None]
        return out

    return circle_integral(g, rule or CircleRule(tol=CONTOUR_TOL))


def derivative_calculus_rd(phi: AnalyticFunction, m: int, T, rho: float | None = None,
                           rule: CircleRule | None = None) -> CalculusResult:
    """``phi^(m)(T)`` from the Riesz-Dunford integral of ``phi^(m)``."""
    rho = default_rho(phi, T) if rho is None else float(rho)
    _check_rho(phi, T, rho)
    dphi = phi.derivative(m)
    res = _contour(T, rho, lambda z: z * dphi.truncated()(z) / (2 * np.pi), 1, rule)
    return CalculusResult(res.value, "contour_RD", res.error, res.converged,
                          [] if res.converged else ["quadrature_not_converged"],
                          {"rho": rho, "nodes": res.n, "m": m})


def derivative_calculus_ipp(phi: AnalyticFunction, m: int, T, rho: float | None = None,
                            rule: CircleRule | None = None) -> CalculusResult:
    """``phi^(m)(T)`` from the integrated-by-parts form with ``R^{m+1}``."""
    rho = default_rho(phi, T) if rho is None else float(rho)
    _check_rho(phi, T, rho)
    base = phi.truncated()
    scale = math.factorial(m) / (2 * np.pi)
    res = _contour(T, rho, lambda z: scale * z * base(z), m + 1, rule)
    return CalculusResult(res.value, "contour_mIPP", res.error, res.converged,
                          [] if res.converged else ["quadrature_not_converged"],
                          {"rho": rho, "nodes": res.n, "m": m})


def horner_calculus(phi: AnalyticFunction, m: int, T) -> CalculusResult:
    """``phi^(m)(T)`` by Horner on the exact derivative coefficients."""
    return CalculusResult(apply_polynomial(phi.derivative(m).truncated(), T), "direct_horner")


def _f_at_zero(f) -> complex:
    return complex(f.coeffs[0])


def besov_representation(f: AnalyticFunction, T, x=None, xstar=None,
                         r_min: float | None = None,
                         radial_rule: RadialRule | None = None,
                         circle_tol: float = 1e-12) -> CalculusResult:
    """``<f(T)x, x*>`` from the radial representation formula.

    ``x`` and ``xstar`` may be vectors (scalar result) or matrices whose
    columns are vectors; with both omitted the identity is used and the
    result is the full matrix ``f(T)`` with entries ``<f(T)e_j, e_i>``.

    ``r_min`` floors the radial integration at ``1 + r_min``.  By default it
    is 0 when the spectral radius is at most 0.99 and ``1e-3`` otherwise; the
    size of the omitted strip is reported in ``meta["dropped_estimate"]``.
    """
    A = as_matrix(T)
    d = A.shape[0]
    if f.radius < 1.0:
        raise RadiusExceeded("the representation needs f' on the unit disk")
    matrix_out = x is None and xstar is None
    X = np.eye(d, dtype=complex) if x is None else np.asarray(x, dtype=complex)
    Xs = np.eye(d, dtype=complex) if xstar is None else np.asarray(xstar, dtype=complex)
    vec_x, vec_xs = X.ndim == 1, Xs.ndim == 1
    X2 = X.reshape(d, -1)
    Xs2 = Xs.reshape(d, -1)
    sigma = spectral_radius(A)
    flags = []
    if sigma > 1.0 + 1e-12:
        flags.append("spectrum_outside_disk")
    if r_min is None:
        r_min = 0.0 if sigma <= 0.99 else 1e-3
    df = f.derivative(1).truncated()

    def inner(r):
        def g(t):
            e = np.exp(1j * t)
            lam = r * e
            w = e ** 3 / r ** 2 * df(e / r)
            out = np.empty((t.size, Xs2.shape[1], X2.shape[1]), dtype=complex)
            for s in range(0, t.size, _CHUNK):
                R = resolvent_stack(A, lam[s:s + _CHUNK])
                R2 = R @ R
                out[s:s + _CHUNK] = (Xs2.T @ R2 @ X2) * w[s:s + _CHUNK, None, None]
            return out

        res = circle_integral(g, CircleRule(tol=circle_tol))
        return res.value, res.converged

    circle_ok = [True]

    def h(rs):
        vals = []
        for r in rs:
            v, ok = inner(float(r))
            circle_ok[0] &= ok
            vals.append((r * r - 1.0) * v / np.pi)
        return np.array(vals)

    lower = 1.0 + r_min
    rad = radial_integral(h, radial_rule or RadialRule(), lower=lower)
    value = rad.value + _f_at_zero(f) * (Xs2.T @ X2)
    dropped = 0.0
    if r_min > 0:
        dropped = float(r_min * np.max(np.abs(h(np.array([lower])))))
        flags.append("radial_floor")
    if not rad.converged:
        flags.append("radial_not_converged")
    if not circle_ok[0]:
        flags.append("circle_not_converged")
    if matrix_out:
        out = value
    elif vec_x and vec_xs:
        out = complex(value[0, 0])
    elif vec_x:
        out = value[:, 0]
    elif vec_xs:
        out = value[0, :]
    else:
        out = value
    return CalculusResult(out, "besov_representation", float(rad.error) + dropped,
                          rad.converged and circle_ok[0], flags,
                          {"r_min": r_min, "panels": rad.n, "dropped_estimate": dropped,
                           "spectral_radius": sigma})


def besov_apply(f: AnalyticFunction, T, x=None, xstar=None, **kwargs):
    """Value of :func:`besov_representation` (complex or matrix)."""
    return besov_representation(f, T, x, xstar, **kwargs).value


def apply_function(f: AnalyticFunction, T, m: int = 0, method: str = "horner",
                   rho: float | None = None) -> CalculusResult:
    """Dispatch used by the command line: ``f^(m)(T)`` by the chosen route."""
    if method == "horner":
        if isinstance(f, PowerSeriesFunction) and spectral_radius(T) >= f.radius:
            raise RadiusExceeded("spectrum lies outside the disk of convergence")
        return horner_calculus(f, m, T)
    if method == "rd":
        return derivative_calculus_rd(f, m, T, rho)
    if method == "ipp":
        return derivative_calculus_ipp(f, m, T, rho)
    if method == "besov":
        return besov_representation(f.derivative(m), T)
    raise InvalidSpec(f"unknown method {method!r}")
