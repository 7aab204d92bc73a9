"""Besov algebra norms on the unit disk and the inequalities around them.

``||f||_B = int_0^1 sup_t |f'(u e^{it})| du + ||f||_{H^inf(D)}``.

The radial representation of ``f(T)`` against the (GFS)_1 bound gives, for
polynomials, ``||P(T)|| <= (C/pi) int_0^1 sup |P'(u .)| du + |P(0)|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import apply_polynomial
from .errors import RadiusExceeded, SpectrumOutsideDisk
from .estimates import ConstantEstimate
from .funcs import (
    AnalyticFunction, Polynomial, PowerSeriesFunction, batch_circle_sup, random_polynomial,
    sup_norm_on_circle, _derivative_coeffs,
)
from .linalg import AmbientSpace, as_matrix, batch_norm_lower, spectral_radius
from .quadrature import RadialRule, _gauss_legendre, gauss_legendre_adaptive

SERIES_EDGE = 1e-6
PROFILES = ("flat", "harmonic", "fejer")


@dataclass
class BesovNormResult:
    derivative_part: float
    sup_part: float
    total: float
    grid_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"derivative_part": self.derivative_part, "sup_part": self.sup_part,
                "total": self.total, "grid_meta": self.grid_meta}


def _grid_for(L: int, grid: int | None) -> int:
    if grid is not None:
        return grid
    return max(4096, 1 << math.ceil(math.log2(16 * L)))


def besov_norm(f: AnalyticFunction, grid: int | None = None, tol: float = 1e-12) -> BesovNormResult:
    """Besov norm with an adaptive Gauss-Legendre outer integral.

    The inner suprema come from :func:`batch_circle_sup`.  ``sup_part`` is
    taken on the unit circle for polynomials.  Series are evaluated on the
    circle of radius ``1 - 1e-6``; the shift to radius 1 is bounded by
    ``1e-6 sup_{|z| = 1} |f'|`` and reported as ``grid_meta["sup_correction"]``.
    """
    if isinstance(f, PowerSeriesFunction) and not f.radius > 1.0:
        raise RadiusExceeded("the Besov norm needs f' on the closed unit disk")
    c = f.coeffs
    dc = _derivative_coeffs(c, 1)
    G = _grid_for(c.size, grid)
    if not np.any(dc):
        deriv = 0.0
        panels = 0
        converged = True
    else:
        def h(u):
            v, _ = batch_circle_sup(np.broadcast_to(dc, (u.size, dc.size)), u, grid=G)
            return v

        res = gauss_legendre_adaptive(h, 0.0, 1.0, RadialRule(order=16, tol=tol, abs_tol=1e-15,
                                                              max_panels=200))
        deriv = float(res.value)
        panels = res.n
        converged = res.converged
    meta = {"grid": G, "panels": panels, "converged": converged}
    if isinstance(f, PowerSeriesFunction):
        rho = 1.0 - SERIES_EDGE
        sup = float(batch_circle_sup(c[None, :], rho, grid=G)[0][0])
        corr = SERIES_EDGE * float(batch_circle_sup(dc[None, :], 1.0, grid=G)[0][0])
        meta.update({"sup_radius": rho, "sup_correction": corr,
                     "tail": f.tail_bound(1.0)})
    else:
        sup = float(batch_circle_sup(c[None, :], 1.0, grid=G)[0][0])
        meta["sup_radius"] = 1.0
    return BesovNormResult(deriv, sup, deriv + sup, meta)


def besov_norm_batch(coeff_rows, panels: int = 4, order: int = 16, grid: int | None = None,
                     refine: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Derivative and sup parts for many polynomials at once.

    Fixed composite Gauss-Legendre rule in ``u`` (``panels`` x ``order``
    nodes) and circle grid ``max(256, 16 (N + 1))``; intended for sampling
    studies where thousands of norms are needed.
    """
    C = np.atleast_2d(np.asarray(coeff_rows, dtype=complex))
    B, L = C.shape
    G = grid or max(256, 1 << math.ceil(math.log2(16 * L)))
    x, w = _gauss_legendre(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    us = np.concatenate([0.5 * (a + b) + 0.5 * (b - a) * x for a, b in zip(edges[:-1], edges[1:])])
    ws = np.concatenate([0.5 * (b - a) * w for a, b in zip(edges[:-1], edges[1:])])
    k = np.arange(1, L)
    D = C[:, 1:] * k if L > 1 else np.zeros((B, 1), dtype=complex)
    rows = np.repeat(D, us.size, axis=0)
    radii = np.tile(us, B)
    sups, _ = batch_circle_sup(rows, radii, grid=G, refine=refine, iterations=30)
    deriv = (sups.reshape(B, us.size) * ws).sum(axis=1)
    sup, _ = batch_circle_sup(C, 1.0, grid=G, refine=refine, iterations=30)
    return deriv, sup


def besov_of_derivative_bound_check(phi: AnalyticFunction, r: float, tol: float = 1e-8) -> dict:
    """``int_0^1 sup |phi''(u .)| du <= 2/(r(r-1)) ||phi||_{H^inf(rD)}``.

    The left side is the derivative part of ``||phi'||_B``; the bound follows
    by integrating the Cauchy estimate for ``phi''`` over ``u``.
    """
    if not r > 1.0:
        raise ValueError("r must exceed 1")
    if r > phi.radius:
        raise RadiusExceeded(f"r={r} exceeds the radius of phi")
    dphi = phi.derivative(1)
    lhs = besov_norm(dphi).derivative_part if not isinstance(dphi, PowerSeriesFunction) \
        else besov_norm(dphi.truncated()).derivative_part
    rhs = 2.0 / (r * (r - 1.0)) * sup_norm_on_circle(phi, r)
    return {"lhs": lhs, "rhs": rhs, "r": r, "holds": lhs <= rhs * (1 + tol)}


def _random_coeffs(rng, n, degree, profile):
    return np.array([random_polynomial(rng, degree, profile).coeffs for _ in range(n)])


def log_degree_bound_check(degrees, samples: int = 256, seed: int = 0,
                           profiles=PROFILES, slope_limit: float = 0.05) -> dict:
    """Ratios ``||P||_B / (log(N+2) ||P||_inf)`` for random polynomials.

    Per degree ``N`` the samples are split over the coefficient profiles;
    the table records the largest ratio.  A least-squares line of the maxima
    against ``log N`` must have slope at most ``slope_limit``.
    """
    rng = np.random.default_rng(seed)
    table = []
    for N in degrees:
        best = 0.0
        per = []
        counts = [samples // len(profiles) + (1 if i < samples % len(profiles) else 0)
                  for i in range(len(profiles))]
        for prof, cnt in zip(profiles, counts):
            if cnt == 0:
                continue
            C = _random_coeffs(rng, cnt, N, prof)
            deriv, sup = besov_norm_batch(C)
            ratio = (deriv + sup) / (math.log(N + 2) * sup)
            per.append((prof, float(ratio.max())))
            best = max(best, float(ratio.max()))
        monomial = 2.0 / math.log(N + 2) if N > 0 else 1.0 / math.log(2)
        table.append({"N": int(N), "max_ratio": best, "by_profile": dict(per),
                      "monomial_ratio": monomial})
    logs = np.log([max(row["N"], 1) for row in table])
    vals = np.array([row["max_ratio"] for row in table])
    slope = float(np.polyfit(logs, vals, 1)[0]) if len(table) > 1 else 0.0
    return {"table": table, "slope": slope, "bound": float(vals.max()),
            "holds": slope <= slope_limit}


def peller_type_constant(T, degree_max: int = 30, samples: int = 256, seed: int = 0,
                         space: AmbientSpace | None = None) -> ConstantEstimate:
    """Lower bound for ``sup ||P(T)|| / ||P||_B`` over sampled polynomials.

    Samples mix the three coefficient profiles and degrees up to
    ``degree_max``; monomials ``z^n`` (Besov norm 2) are always included.
    ``meta["by_degree"]`` gives the running maximum over degrees; a growth
    flag is raised when it doubles between ``degree_max/4`` and
    ``degree_max``.
    """
    A = as_matrix(T)
    d = A.shape[0]
    space = space or AmbientSpace.hilbert(d)
    sigma = spectral_radius(A)
    if sigma > 1.0 + 1e-9:
        raise SpectrumOutsideDisk(f"spectral radius {sigma} exceeds 1")
    rng = np.random.default_rng(seed)
    powers = [np.eye(d, dtype=complex)]
    for _ in range(degree_max):
        powers.append(powers[-1] @ A)
    powers = np.array(powers)
    pn = batch_norm_lower(powers, space)
    by_degree = np.zeros(degree_max + 1)
    by_degree[1:] = pn[1:] / 2.0
    by_degree[0] = 1.0
    best = (float(by_degree.max()), {"family": "monomial", "n": int(np.argmax(by_degree))})
    if samples:
        degs = rng.integers(1, degree_max + 1, size=samples)
        profs = rng.integers(0, len(PROFILES), size=samples)
        C = np.zeros((samples, degree_max + 1), dtype=complex)
        for i in range(samples):
            c = random_polynomial(rng, int(degs[i]), PROFILES[profs[i]]).coeffs
            C[i, : c.size] = c
        deriv, sup = besov_norm_batch(C)
        vals = batch_norm_lower(np.einsum("sk,kij->sij", C, powers), space) / (deriv + sup)
        for i in range(samples):
            by_degree[degs[i]] = max(by_degree[degs[i]], vals[i])
        j = int(np.argmax(vals))
        if vals[j] > best[0]:
            best = (float(vals[j]), {"family": "random_poly", "coeffs": C[j]})
    running = np.maximum.accumulate(by_degree)
    est = ConstantEstimate(best[0], "peller_C", "lower", witnesses=[best[1]],
                           meta={"by_degree": running.tolist(), "degree_max": degree_max,
                                 "samples": samples, "seed": seed})
    quarter = max(1, degree_max // 4)
    if running[-1] >= 2.0 * running[quarter]:
        est.flags.append("growing")
    return est


def peller_bound_check(T, gfs_C: float, degree_max: int = 30, samples: int = 128, seed: int = 0,
                       safety: float = 1.1) -> dict:
    """``||P(T)|| <= max(1, C/pi) safety ||P||_B`` on sampled polynomials.

    Also reports the sharper ``(C/pi) deriv_part + |P(0)|`` form.
    """
    A = as_matrix(T)
    d = A.shape[0]
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_sharp = 0.0
    for i in range(samples):
        N = int(rng.integers(1, degree_max + 1))
        P = random_polynomial(rng, N, PROFILES[i % len(PROFILES)])
        nb = besov_norm_batch(P.coeffs[None, :])
        deriv, sup = float(nb[0][0]), float(nb[1][0])
        normP = float(np.linalg.norm(apply_polynomial(P, A), 2))
        worst = max(worst, normP / (safety * max(1.0, gfs_C / math.pi) * (deriv + sup)))
        worst_sharp = max(worst_sharp, normP / ((gfs_C / math.pi) * deriv + abs(P.coeffs[0])))
    return {"worst_ratio": worst, "worst_sharp_ratio": worst_sharp, "holds": worst <= 1.0}


def submultiplicativity_constant(samples: int = 64, degree: int = 12, seed: int = 0) -> dict:
    """Measured ``K = max ||fg||_B / (||f||_B ||g||_B)`` over random pairs."""
    rng = np.random.default_rng(seed)
    K = 0.0
    for i in range(samples):
        f = random_polynomial(rng, degree, PROFILES[i % 3])
        g = random_polynomial(rng, degree, PROFILES[(i + 1) % 3])
        K = max(K, besov_norm(f * g).total / (besov_norm(f).total * besov_norm(g).total))
    return {"K": K, "samples": samples}
