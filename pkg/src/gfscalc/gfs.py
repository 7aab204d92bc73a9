"""Discrete Gomilko-Shi-Feng integrals and the constants built from them.

For ``r > 1`` and ``m >= 1`` the probe integral is::

    J_m(r; x, x*) = int_0^{2pi} |<R(re^{it}, T)^{m+1} x, x*>| dt

and its normalized form ``(r+1)(r-1)^m J / (||x|| ||x*||)``.  The condition
(GFS)_m asks for a uniform bound ``C`` on the normalized form.  All constant
estimators below return suprema over sampled data, hence lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec, SingularResolvent, SpectrumOutsideDisk, UnsupportedM
from .estimates import ConstantEstimate, growth_from_profile
from .funcs import batch_circle_sup, falling_factorial
from .linalg import (
    AmbientSpace, as_matrix, batch_norm_lower, conjugate, dual_norm, inverse,
    matrix_powers, operator_norm_upper, resolvent_apply_stack, resolvent_stack,
    spectral_radius, vector_norm,
)
from .quadrature import CircleRule, RadialRule, circle_integral, next_power_of_two, radial_integral

R_MIN = 1e-3
R_MAX = 10.0
GRID_POINTS = 30
PROBE_TOL = 1e-8
DIVERGENCE_FLOORS = (1e-1, 1e-2, 1e-3)
_CHUNK = 8192
# bytes allowed for a cached stack of resolvent powers during ascent
_ASCENT_MEMORY = 64e6


def default_r_grid(r_min: float = R_MIN, r_max: float = R_MAX, points: int = GRID_POINTS,
                   extra=()) -> np.ndarray:
    """Radii ``1 + s`` with ``s`` geometric from ``r_min`` to ``r_max - 1``."""
    if not (0 < r_min < r_max - 1):
        raise InvalidSpec("need 0 < r_min < r_max - 1")
    s = np.geomspace(r_min, r_max - 1.0, points + 1)
    grid = np.concatenate([1.0 + s, np.asarray(extra, dtype=float)])
    return np.unique(grid)


def _space(T, space):
    return space or AmbientSpace.hilbert(as_matrix(T).shape[0])


def normalization(r: float, m: int) -> float:
    return (r + 1.0) * (r - 1.0) ** m


@dataclass
class GfsProbe:
    r: float
    m: int
    x: np.ndarray
    xstar: np.ndarray
    value: float
    normalized: float
    signed: float
    n: int
    converged: bool

    def to_dict(self) -> dict:
        return {"r": self.r, "m": self.m, "x": self.x, "xstar": self.xstar,
                "value": self.value, "normalized": self.normalized,
                "signed": self.signed, "n": self.n, "converged": self.converged}


def initial_nodes(r: float) -> int:
    return max(64, next_power_of_two(16.0 / (r - 1.0)))


def gfs_integral(T, r: float, m: int, x, xstar, space: AmbientSpace | None = None,
                 tol: float = PROBE_TOL, n_max: int = 2**20) -> GfsProbe:
    """Probe integral ``J_m(r; x, x*)`` by trapezoid doubling.

    The integrand is an absolute value and so only piecewise analytic; the
    rule starts at ``max(64, 16/(r-1))`` nodes so that the peaks of width
    ``r - 1`` are resolved, then doubles up to ``n_max``.
    """
    if m < 0:
        raise UnsupportedM("m must be nonnegative")
    if not r > 1.0:
        raise InvalidSpec("probe radius must exceed 1")
    A = as_matrix(T)
    space = _space(A, space)
    x = np.asarray(x, dtype=complex)
    xs = np.asarray(xstar, dtype=complex)

    def g(t):
        out = np.empty((t.size, 2), dtype=complex)
        for s in range(0, t.size, _CHUNK):
            lam = r * np.exp(1j * t[s:s + _CHUNK])
            p = resolvent_apply_stack(A, lam, m + 1, x) @ xs
            out[s:s + _CHUNK, 0] = np.abs(p)
            out[s:s + _CHUNK, 1] = p
        return out

    n0 = initial_nodes(r)
    res = circle_integral(g, CircleRule(n0, tol, max(n_max, n0)))
    J = float(res.value[0].real)
    nx, nxs = vector_norm(x, space), dual_norm(xs, space)
    normalized = normalization(r, m) * J / (nx * nxs) if nx * nxs > 0 else 0.0
    return GfsProbe(float(r), m, x, xs, J, normalized, float(abs(res.value[1])), res.n, res.converged)


def gfs_profile(T, m: int, x, xstar, r_grid, space=None) -> list[GfsProbe]:
    """Probes of one pair at every radius of a grid."""
    return [gfs_integral(T, float(r), m, x, xstar, space) for r in r_grid]


def sweep_nodes(r: float) -> int:
    return max(128, next_power_of_two(32.0 / (r - 1.0)))


def _gaussian_pairs(rng, d, n):
    X = (rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))) / math.sqrt(2)
    Xs = (rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))) / math.sqrt(2)
    return X, Xs


def _power_stack(A, r, m, N):
    t = 2 * np.pi * np.arange(N) / N
    return matrix_powers(resolvent_stack(A, r * np.exp(1j * t)), m + 1)


def _sweep_radius(A, r, m, X, Xs, nx, nxs):
    """Normalized probe values at one radius for basis and random pairs."""
    d = A.shape[0]
    N = sweep_nodes(r)
    acc_basis = np.zeros((d, d))
    acc_rand = np.zeros(X.shape[1])
    step = max(1, _CHUNK // max(1, d))
    for s in range(0, N, step):
        t = 2 * np.pi * np.arange(s, min(N, s + step)) / N
        P = matrix_powers(resolvent_stack(A, r * np.exp(1j * t)), m + 1)
        acc_basis += np.abs(P).sum(axis=0)
        if X.shape[1]:
            p = np.einsum("ds,cds->cs", Xs, P @ X)
            acc_rand += np.abs(p).sum(axis=0)
    w = normalization(r, m) * 2 * np.pi / N
    return w * acc_basis, w * acc_rand / (nx * nxs), N


class _Objective:
    """Normalized probe on a fixed node set with cheap finite differences.

    A perturbation of one coordinate of ``x`` changes every pairing
    ``p_j = x*^T A_j x`` by ``h (A_j^T x*)_k``, so all ``4d`` directional
    differences cost ``O(N d)`` once ``A_j x`` and ``A_j^T x*`` are known.
    """

    def __init__(self, P, r, m, space):
        self.P = P
        self.w = normalization(r, m) * 2 * np.pi / P.shape[0]
        self.space = space

    def value(self, x, xs):
        p = np.einsum("cjk,k->cj", self.P, x) @ xs
        return self.w * np.abs(p).sum() / (vector_norm(x, self.space) * dual_norm(xs, self.space))

    def gradient(self, x, xs, h):
        v = np.einsum("cjk,k->cj", self.P, x)
        p = v @ xs
        u = np.einsum("cjk,j->ck", self.P, xs)
        d = x.size
        nx, nxs = vector_norm(x, self.space), dual_norm(xs, self.space)
        eye = np.eye(d)
        grads = []
        for base, other_norm, direction, is_x in ((x, nxs, u, True), (xs, nx, v, False)):
            for unit in (1.0, 1j):
                Jp = np.abs(p[:, None] + h * unit * direction).sum(axis=0)
                Jm = np.abs(p[:, None] - h * unit * direction).sum(axis=0)
                shifted_p = base[None, :] + h * unit * eye
                shifted_m = base[None, :] - h * unit * eye
                if is_x:
                    np_ = np.array([vector_norm(z, self.space) for z in shifted_p])
                    nm_ = np.array([vector_norm(z, self.space) for z in shifted_m])
                else:
                    np_ = np.array([dual_norm(z, self.space) for z in shifted_p])
                    nm_ = np.array([dual_norm(z, self.space) for z in shifted_m])
                Fp = self.w * Jp / (np_ * other_norm)
                Fm = self.w * Jm / (nm_ * other_norm)
                grads.append((Fp - Fm) / (2 * h))
        gx = grads[0] + 1j * grads[1]
        gxs = grads[2] + 1j * grads[3]
        return gx, gxs


def _ascent(A, r, m, x, xs, space, steps, h):
    N = sweep_nodes(r)
    d = A.shape[0]
    while N > 128 and N * d * d * 16 > _ASCENT_MEMORY:
        N //= 2
    obj = _Objective(_power_stack(A, r, m, N), r, m, space)
    x = x / vector_norm(x, space)
    xs = xs / dual_norm(xs, space)
    val = obj.value(x, xs)
    eta = 0.1
    for _ in range(steps):
        gx, gxs = obj.gradient(x, xs, h)
        gn = math.sqrt(float(np.sum(np.abs(gx) ** 2) + np.sum(np.abs(gxs) ** 2)))
        if gn == 0.0:
            break
        while eta > 1e-8:
            nx_ = x + eta * gx / gn
            nxs_ = xs + eta * gxs / gn
            nx_ = nx_ / vector_norm(nx_, space)
            nxs_ = nxs_ / dual_norm(nxs_, space)
            new = obj.value(nx_, nxs_)
            if new > val:
                x, xs, val = nx_, nxs_, new
                eta = min(1.0, 1.5 * eta)
                break
            eta *= 0.5
        else:
            break
    return x, xs


def gfs_constant(T, m: int = 1, r_grid=None, samples: int = 256, seed: int = 0,
                 space: AmbientSpace | None = None, ascent_steps: int = 50,
                 fd_step: float = 1e-4, restarts: int = 8,
                 floors=DIVERGENCE_FLOORS) -> ConstantEstimate:
    """Lower-bound estimate of the (GFS)_m constant.

    Candidates are the coordinate pairs ``(e_a, e_b)`` and ``samples``
    seeded complex Gaussian pairs at every radius of ``r_grid`` (swept on a
    fixed grid of ``max(128, 32/(r-1))`` nodes), followed by projected
    finite-difference ascent from the ``restarts`` best candidates.  Every
    reported witness is recomputed with :func:`gfs_integral`.

    ``meta["profile"]`` lists the best normalized value per radius;
    ``meta["growth"]`` classifies how the supremum behaves as the grid floor
    ``r - 1`` runs through ``floors``.
    """
    if m < 1:
        raise UnsupportedM("the GFS condition is defined for m >= 1")
    A = as_matrix(T)
    d = A.shape[0]
    space = _space(A, space)
    grid = default_r_grid(extra=[1 + s for s in floors]) if r_grid is None else np.asarray(r_grid, float)
    if np.any(grid <= 1.0):
        raise InvalidSpec("grid radii must exceed 1")
    rng = np.random.default_rng(seed)
    X, Xs = _gaussian_pairs(rng, d, samples)
    nx = np.array([vector_norm(X[:, j], space) for j in range(samples)])
    nxs = np.array([dual_norm(Xs[:, j], space) for j in range(samples)])
    eye = np.eye(d, dtype=complex)
    candidates = []
    profile = {}
    for r in grid:
        basis, rand, N = _sweep_radius(A, float(r), m, X, Xs, nx, nxs)
        b, a = np.unravel_index(int(np.argmax(basis)), basis.shape)
        candidates.append((float(basis[b, a]), float(r), eye[a], eye[b]))
        if samples:
            j = int(np.argmax(rand))
            candidates.append((float(rand[j]), float(r), X[:, j], Xs[:, j]))
        profile[float(r)] = max(float(basis.max()), float(rand.max()) if samples else 0.0)
    candidates.sort(key=lambda c: -c[0])
    probes = []
    for val, r, x, xs in candidates[:restarts]:
        probes.append(gfs_integral(A, r, m, x, xs, space))
        if ascent_steps > 0:
            x2, xs2 = _ascent(A, r, m, x, xs, space, ascent_steps, fd_step)
            probes.append(gfs_integral(A, r, m, x2, xs2, space))
    for pr in probes:
        profile[pr.r] = max(profile.get(pr.r, 0.0), pr.normalized)
    best = max(probes, key=lambda pr: pr.normalized)
    prof = sorted(profile.items())
    est = ConstantEstimate(
        best.normalized, f"gfs_C({m})", "lower",
        witnesses=[best.to_dict()],
        converged=all(pr.converged for pr in probes),
        meta={"profile": prof, "growth": growth_from_profile(prof, floors),
              "samples": samples, "seed": seed, "grid_size": len(grid), "ambient": space.label()},
    )
    if est.meta["growth"]["status"] == "diverging":
        est.flags.append("diverging")
    if not est.converged:
        est.flags.append("quadrature_not_converged")
    return est


# ------------------------------------------------ derivative functional calculus


def _pole_radii(r):
    return [r + (r - 1.0) * c for c in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)] + [1.5 * r, 3.0 * r]


def dfc_constant(T, m: int = 1, r_grid=None, samples: int = 64, seed: int = 0,
                 space: AmbientSpace | None = None, degree: int = 16, angles: int = 32,
                 max_power: int = 64, floors=DIVERGENCE_FLOORS) -> ConstantEstimate:
    """Lower bound for the m-derivative functional calculus constant

    ``sup (r-1)^m ||phi^(m)(T)|| / ||phi||_{H^inf(r D)}``.

    Test functions per radius ``r``:

    * Cauchy kernels ``phi(z) = (1-a) / (1 - a e^{-i theta} z / r)`` with
      unit sup norm on ``rD``; then ``phi^(m)(T) = (1-a) m! (r/a) e^{i theta}
      R(r e^{i theta}/a, T)^{m+1}``.
    * scaled monomials ``(z/r)^n`` for ``m <= n <= max_power``.
    * ``samples`` random polynomials of the given degree, normalized by
      their sup norm on the circle of radius ``r``.
    """
    if m < 1:
        raise UnsupportedM("the derivative calculus constant is defined for m >= 1")
    A = as_matrix(T)
    d = A.shape[0]
    space = _space(A, space)
    sigma = spectral_radius(A)
    if sigma > 1.0 + 1e-9:
        raise SpectrumOutsideDisk(f"spectral radius {sigma} exceeds 1")
    grid = default_r_grid(extra=[1 + s for s in floors]) if r_grid is None else np.asarray(r_grid, float)
    rng = np.random.default_rng(seed)
    theta = np.concatenate([2 * np.pi * np.arange(angles) / angles,
                            np.angle(np.linalg.eigvals(A))])
    powers = [np.eye(d, dtype=complex)]
    for _ in range(max(max_power, degree)):
        powers.append(powers[-1] @ A)
    powers = np.array(powers)
    power_norms = batch_norm_lower(powers, space)
    coeffs = (rng.standard_normal((samples, degree + 1))
              + 1j * rng.standard_normal((samples, degree + 1))) / math.sqrt(2)
    k = np.arange(degree + 1)
    ff = np.array([falling_factorial(int(j), m) for j in k])
    profile = {}
    best = (0.0, None)
    for r in grid:
        r = float(r)
        top = 0.0
        for rho_p in _pole_radii(r):
            a = r / rho_p
            lam = rho_p * np.exp(1j * theta)
            try:
                P = matrix_powers(resolvent_stack(A, lam), m + 1)
            except SingularResolvent:
                continue
            vals = (r - 1.0) ** m * (1 - a) * math.factorial(m) * rho_p * batch_norm_lower(P, space)
            j = int(np.argmax(vals))
            if vals[j] > top:
                top = float(vals[j])
            if vals[j] > best[0]:
                best = (float(vals[j]), {"family": "cauchy", "r": r, "a": a, "theta": float(theta[j])})
        n = np.arange(m, max_power + 1)
        mono = np.array([(r - 1.0) ** m * falling_factorial(int(q), m) * r ** (-float(q))
                         * power_norms[q - m] for q in n])
        j = int(np.argmax(mono))
        top = max(top, float(mono[j]))
        if mono[j] > best[0]:
            best = (float(mono[j]), {"family": "monomial", "r": r, "n": int(n[j])})
        if samples:
            sups, _ = batch_circle_sup(coeffs, r, grid=max(256, 16 * (degree + 1)))
            dcoef = coeffs[:, m:] * ff[m:]
            mats = np.einsum("sk,kij->sij", dcoef, powers[: degree + 1 - m])
            vals = (r - 1.0) ** m * batch_norm_lower(mats, space) / sups
            j = int(np.argmax(vals))
            top = max(top, float(vals[j]))
            if vals[j] > best[0]:
                best = (float(vals[j]), {"family": "random_poly", "r": r, "coeffs": coeffs[j]})
        profile[r] = top
    prof = sorted(profile.items())
    est = ConstantEstimate(best[0], f"dfc_C({m})", "lower", witnesses=[best[1]] if best[1] else [],
                           meta={"profile": prof, "growth": growth_from_profile(prof, floors),
                                 "samples": samples, "seed": seed, "ambient": space.label()})
    if est.meta["growth"]["status"] == "diverging":
        est.flags.append("diverging")
    return est


# ------------------------------------------------------------ structure checks


def downward_induction_check(T, m: int, r: float, pairs=None, samples: int = 2, seed: int = 0,
                             space: AmbientSpace | None = None, tol: float = 1e-6) -> dict:
    """Check ``J^{(k+1)}(r) <= (k+1) int_r^inf J^{(k+2)}(u) du`` for k = m-1..1.

    ``J^{(p)}`` is the angular integral of ``|<R^p x, x*>|``; the inequality
    follows from ``d/du R(ue^{it})^{k+1} = -(k+1) e^{it} R(ue^{it})^{k+2}``.
    Pairs default to ``(e_1, e_1)`` plus ``samples`` seeded Gaussian pairs.
    """
    if m < 2:
        raise UnsupportedM("downward induction needs m >= 2")
    A = as_matrix(T)
    d = A.shape[0]
    space = _space(A, space)
    if pairs is None:
        rng = np.random.default_rng(seed)
        X, Xs = _gaussian_pairs(rng, d, samples)
        e1 = np.eye(d, dtype=complex)[0]
        pairs = [(e1, e1)] + [(X[:, j], Xs[:, j]) for j in range(samples)]
    rows = []
    for x, xs in pairs:
        for k in range(m - 1, 0, -1):
            lhs = gfs_integral(A, r, k, x, xs, space).value

            def h(us, k=k, x=x, xs=xs):
                return np.array([gfs_integral(A, float(u), k + 1, x, xs, space).value for u in us])

            rad = radial_integral(h, RadialRule(order=10, tol=1e-8), lower=r)
            rhs = (k + 1) * float(np.real(rad.value))
            rows.append({"k": k, "power": k + 1, "lhs": lhs, "rhs": rhs,
                         "holds": lhs <= rhs * (1 + tol) + 1e-14})
    return {"m": m, "r": r, "rows": rows, "holds": all(row["holds"] for row in rows)}


def similarity_transfer_check(S, U, m: int = 1, space: AmbientSpace | None = None,
                              r_grid=None, samples: int = 64, seed: int = 0,
                              tol: float = 1e-6, **kwargs) -> dict:
    """Compare the GFS constants of ``S`` and ``T = U S U^{-1}``.

    Since ``<R(T)^k x, x*> = <R(S)^k U^{-1} x, U^T x*>``, each witness for
    ``T`` maps to a pair for ``S`` losing at most ``kappa = ||U|| ||U^{-1}||``.
    The mapped witnesses are added to the candidates for ``S`` and the check
    asserts ``C_T <= kappa C_S (1 + tol)``.
    """
    S = as_matrix(S)
    U = as_matrix(U)
    space = _space(S, space)
    T = conjugate(S, U)
    Uinv = inverse(U)
    kappa = operator_norm_upper(U, space) * operator_norm_upper(Uinv, space)
    est_S = gfs_constant(S, m, r_grid, samples, seed, space, **kwargs)
    est_T = gfs_constant(T, m, r_grid, samples, seed, space, **kwargs)
    C_S = est_S.value
    for w in est_T.witnesses:
        pr = gfs_integral(S, w["r"], m, Uinv @ w["x"], U.T @ w["xstar"], space)
        C_S = max(C_S, pr.normalized)
    C_T = est_T.value
    return {"C_S": C_S, "C_T": C_T, "kappa": kappa, "ratio": C_T / C_S if C_S else math.inf,
            "holds": C_T <= kappa * C_S * (1 + tol), "T": T}
