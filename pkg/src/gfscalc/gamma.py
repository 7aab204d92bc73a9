"""Gaussian (gamma) norms of finite vector tuples and gamma-bounds of
operator families.

``||(x_k)||_gamma = (E ||sum_k gamma_k x_k||^2)^{1/2}`` for independent
complex standard Gaussians with ``E|gamma|^2 = 1``.  On Hilbert space this
is ``(sum ||x_k||^2)^{1/2}`` exactly.  On ``l^p`` it is estimated by Monte
Carlo with a delta-method standard error; the dual norm ``gamma'`` is
approximated by maximizing ``|sum <z_k, x*_k>| / ||(z_k)||_gamma``.

Every draw comes from a ``numpy`` generator seeded by a ``SeedSequence``,
so results are reproducible given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidSpec, SpectrumOutsideDisk
from .estimates import ConstantEstimate, growth_from_profile
from .linalg import (
    AmbientSpace, as_matrix, batch_norm_lower, matrix_powers, pairing, pnorm,
    resolvent_stack, spectral_radius,
)
from .quadrature import CircleRule, fourier_coefficients, next_power_of_two

DEFAULT_K = 10_000
SIZES = (1, 2, 4, 8, 16)


@dataclass(frozen=True)
class GaussianSample:
    """Seeded complex standard Gaussians of shape ``(K, n)``.

    Real and imaginary parts are independent ``N(0, 1/2)``, so
    ``E|gamma|^2 = 1``.  ``stream`` selects an independent substream of the
    seed.
    """

    seed: int
    K: int
    n: int
    stream: int = 0

    @property
    def draws(self) -> np.ndarray:
        ss = np.random.SeedSequence([int(self.seed), int(self.stream)])
        rng = np.random.default_rng(ss)
        g = rng.standard_normal((self.K, self.n, 2))
        return (g[..., 0] + 1j * g[..., 1]) / math.sqrt(2.0)


@dataclass
class GammaNormEstimate:
    value: float
    std_error: float
    K: int
    exact: bool
    flags: list[str] = field(default_factory=list)

    @property
    def rel_error(self) -> float:
        return self.std_error / self.value if self.value > 0 else 0.0

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error, "K": self.K,
                "exact": self.exact, "flags": self.flags}


def _tuple(xs) -> np.ndarray:
    X = np.asarray(xs, dtype=complex)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[0] == 0:
        raise InvalidSpec("expected a nonempty list of vectors")
    return X


def _mc_norm(X, p, G):
    """``(mean_k ||sum_n G[k, n] X[n]||_p^2)^{1/2}`` and its standard error."""
    S = G @ X
    n2 = pnorm(S, p, axis=1) ** 2
    m2 = float(n2.mean())
    value = math.sqrt(m2)
    se = float(n2.std(ddof=1)) / math.sqrt(n2.size) / (2 * value) if value > 0 and n2.size > 1 else 0.0
    return value, se


def gaussian_norm(xs, space: AmbientSpace, K: int = DEFAULT_K, seed: int = 0,
                  stream: int = 0, force_mc: bool = False) -> GammaNormEstimate:
    """``||sum_k gamma_k x_k||_{G(X)}``: closed form on Hilbert space, Monte
    Carlo on ``l^p`` (or when ``force_mc`` is set)."""
    X = _tuple(xs)
    if space.is_hilbert and not force_mc:
        return GammaNormEstimate(float(np.sqrt(np.sum(np.abs(X) ** 2))), 0.0, 0, True)
    G = GaussianSample(seed, K, X.shape[0], stream).draws
    value, se = _mc_norm(X, space.p, G)
    return GammaNormEstimate(value, se, K, False)


def _norm_and_grad(Z, p, G):
    """MC gamma norm of the tuple ``Z`` and its gradient with respect to the
    real and imaginary parts, packed as ``d/dRe + i d/dIm``."""
    S = G @ Z
    a = np.abs(S)
    ns = pnorm(S, p, axis=1)
    m2 = float(np.mean(ns ** 2))
    g = math.sqrt(m2)
    safe = np.where(a > 0, a, 1.0)
    nsafe = np.where(ns > 0, ns, 1.0)
    # gradient of ||S_k||_p is |S|^{p-2} S / ||S||^{p-1}
    dn = np.where(a > 0, safe ** (p - 2) * S, 0.0) / nsafe[:, None] ** (p - 1)
    dm2 = 2.0 * (ns[:, None] * dn)
    grad = G.conj().T @ dm2 / S.shape[0]
    return g, grad / (2 * g) if g > 0 else grad


def _pack(Z):
    return np.concatenate([Z.real.ravel(), Z.imag.ravel()])


def _unpack(v, shape):
    n = v.size // 2
    return (v[:n] + 1j * v[n:]).reshape(shape)


def _dual_start(Xs, p):
    """``z_k`` aligned with ``x*_k``: ``conj(x*) |x*|^{q-2}``."""
    q = p / (p - 1.0)
    a = np.abs(Xs)
    return np.where(a > 0, np.conj(Xs) * np.where(a > 0, a, 1.0) ** (q - 2), 0.0)


def gamma_dual_norm(xstars, space: AmbientSpace, K: int = 2000, seed: int = 1,
                    restarts: int = 8, maxiter: int = 300, eval_K: int | None = None,
                    return_witness: bool = False):
    """Lower-bound estimate of ``||(x*_k)||_{gamma'}``.

    Hilbert: ``(sum ||x*_k||^2)^{1/2}`` exactly.  ``l^p``: L-BFGS ascent of
    ``Re sum <z_k, x*_k> / ||(z_k)||_gamma`` with the gamma norm sampled on
    stream 0; the best ``z`` is then re-evaluated on an independent stream so
    that the optimization does not bias the reported value.  The superlevel
    sets of the objective are convex, so the restarts (aligned start plus
    seeded random ones) guard only against slow convergence.
    """
    Xs = _tuple(xstars)
    if space.is_hilbert:
        val = float(np.sqrt(np.sum(np.abs(Xs) ** 2)))
        est = GammaNormEstimate(val, 0.0, 0, True)
        return (est, np.conj(Xs) / val if val else Xs) if return_witness else est
    if not np.any(Xs):
        est = GammaNormEstimate(0.0, 0.0, K, False)
        return (est, Xs) if return_witness else est
    p = space.p
    G = GaussianSample(seed, K, Xs.shape[0], 0).draws
    shape = Xs.shape

    def fun(v):
        Z = _unpack(v, shape)
        f = float(np.real(np.sum(Z * Xs)))
        g, dg = _norm_and_grad(Z, p, G)
        if g == 0:
            return 0.0, np.zeros_like(v)
        F = f / g
        grad = (np.conj(Xs) * g - f * dg) / (g * g)
        return -F, -_pack(grad)

    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 99]))
    starts = [_dual_start(Xs, p), np.conj(Xs)]
    for _ in range(max(0, restarts - 2)):
        starts.append(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    best, best_Z, ok = -math.inf, None, True
    for Z0 in starts:
        res = minimize(fun, _pack(Z0), jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "gtol": 1e-10})
        ok &= bool(res.success) or res.nit >= maxiter
        if -res.fun > best:
            best, best_Z = -res.fun, _unpack(res.x, shape)
    Geval = GaussianSample(seed, eval_K or K, Xs.shape[0], 1).draws
    g, se = _mc_norm(best_Z, p, Geval)
    f = float(np.real(np.sum(best_Z * Xs)))
    value = f / g
    est = GammaNormEstimate(value, value * se / g, eval_K or K, False,
                            [] if ok else ["nonconvergence"])
    return (est, best_Z / g) if return_witness else est


def gamma_holder_check(xs, xstars, space: AmbientSpace, K: int = DEFAULT_K, seed: int = 0,
                       dual_K: int = 2000, restarts: int = 8) -> dict:
    """``|sum <x_k, x*_k>| <= ||(x_k)||_gamma ||(x*_k)||_gamma'``.

    The two norms use independent seed streams.  The check passes when the
    left side is at most the right side times ``1 + 3 (rel. std. error)``.
    """
    X = _tuple(xs)
    Xs = _tuple(xstars)
    if X.shape != Xs.shape:
        raise InvalidSpec("tuples must have equal lengths and dimensions")
    lhs = abs(complex(np.sum(X * Xs)))
    a = gaussian_norm(X, space, K, seed, stream=2)
    b = gamma_dual_norm(Xs, space, dual_K, seed + 1, restarts)
    rhs = a.value * b.value
    rel = a.rel_error + b.rel_error
    holds = lhs <= rhs * (1 + 3 * rel) + (1e-12 * rhs if a.exact and b.exact else 0.0)
    return {"lhs": lhs, "rhs": rhs, "rel_error": rel, "holds": holds,
            "exact": a.exact and b.exact}


# ------------------------------------------------------------ gamma-bounds


def _ratio_and_grad(Z, mats, p, G):
    """MC ratio ``||(A_k z_k)|| / ||(z_k)||`` and gradient in ``Z``."""
    Y = np.einsum("kij,kj->ki", mats, Z)
    num, dnum_Y = _norm_and_grad(Y, p, G)
    den, dden = _norm_and_grad(Z, p, G)
    dnum = np.einsum("kji,kj->ki", mats.conj(), dnum_Y)
    F = num / den
    return F, (dnum * den - num * dden) / (den * den)


def _ascent_tuple(Z0, mats, p, G, maxiter):
    shape = Z0.shape

    def fun(v):
        Z = _unpack(v, shape)
        F, grad = _ratio_and_grad(Z, mats, p, G)
        return -F, -_pack(grad)

    res = minimize(fun, _pack(Z0), jac=True, method="L-BFGS-B", options={"maxiter": maxiter})
    return _unpack(res.x, shape)


def gamma_bound_of_family(family, space: AmbientSpace, K: int = 2000, seed: int = 0,
                          sizes=SIZES, selections: int = 8, tuples: int = 4,
                          ascent: int = 2, maxiter: int = 60) -> ConstantEstimate:
    """Lower-bound estimate of the gamma-bound of a finite operator family.

    For each tuple length ``N`` the candidates are selections
    ``(T_{j_1}, ..., T_{j_N})`` (the first ``N`` members in order, the
    member of largest norm repeated, and seeded random selections) paired
    with vector tuples: the same basis vector in every slot (the four
    columns of largest total mass over the selection), the all-ones vector
    and seeded Gaussian tuples.  The best few candidates are refined by
    L-BFGS ascent of the sampled ratio.  Every ratio is finally evaluated on
    an independent seed stream.  ``N = 1`` reduces to the operator norms.
    """
    mats = np.asarray([as_matrix(A) for A in family])
    F, d, _ = mats.shape
    norms = batch_norm_lower(mats, space)
    j_best = int(np.argmax(norms))
    best = (float(norms[j_best]), {"N": 1, "members": [j_best]})
    if space.is_hilbert:
        # sum ||A_k x_k||^2 / sum ||x_k||^2 is maximized by one slot
        return ConstantEstimate(best[0], "gamma_bound", "two_sided", witnesses=[best[1]],
                                meta={"ambient": space.label(), "family_size": F})
    p = space.p
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 7]))
    cands = []
    for N in sizes:
        if N == 1 or N > max(F, 1) * 4:
            continue
        G = GaussianSample(seed, K, N, 0).draws
        sels = [np.arange(N) % F, np.full(N, j_best)]
        sels += [rng.integers(0, F, size=N) for _ in range(selections)]
        for sel in sels:
            A = mats[sel]
            # basis vectors whose images carry the most mass across the selection
            mass = pnorm(A, p, axis=1).sum(axis=0)
            top = np.argsort(-mass, kind="stable")[: min(d, 4)]
            Zs = [np.tile(np.eye(d, dtype=complex)[i], (N, 1)) for i in top]
            Zs.append(np.ones((N, d), dtype=complex))
            for _ in range(tuples):
                Zs.append(rng.standard_normal((N, d)) + 1j * rng.standard_normal((N, d)))
            for Z in Zs:
                Y = np.einsum("kij,kj->ki", A, Z)
                ratio = _mc_norm(Y, p, G)[0] / _mc_norm(Z, p, G)[0]
                cands.append((ratio, N, sel, Z))
    cands.sort(key=lambda c: -c[0])
    finals = []
    for ratio, N, sel, Z in cands[: max(ascent, 1) * 2]:
        finals.append((N, sel, Z))
    for ratio, N, sel, Z in cands[:ascent]:
        G = GaussianSample(seed, K, N, 0).draws
        finals.append((N, sel, _ascent_tuple(Z, mats[sel], p, G, maxiter)))
    for N, sel, Z in finals:
        Ge = GaussianSample(seed, K, N, 1).draws
        Y = np.einsum("kij,kj->ki", mats[sel], Z)
        num, se_n = _mc_norm(Y, p, Ge)
        den, se_d = _mc_norm(Z, p, Ge)
        ratio = num / den
        if ratio > best[0]:
            best = (ratio, {"N": int(N), "members": sel.tolist(), "x": Z,
                            "rel_error": se_n / num + se_d / den})
    return ConstantEstimate(float(best[0]), "gamma_bound", "lower", witnesses=[best[1]],
                            meta={"ambient": space.label(), "family_size": F, "K": K, "seed": seed})


def power_family(T, n: int) -> np.ndarray:
    """``[T^0, T^1, ..., T^{n-1}]``."""
    A = as_matrix(T)
    out = [np.eye(A.shape[0], dtype=complex)]
    for _ in range(n - 1):
        out.append(out[-1] @ A)
    return np.array(out)


# ------------------------------------------------------ lattice square norms


def lattice_square_norm(fs, p: float, measure: str = "normalized") -> float:
    """``||(sum_k int |f_k|^2)^{1/2}||_p`` computed coordinatewise.

    ``fs`` has shape ``(K, d)`` (functions constant in ``t``) or
    ``(K, Nt, d)`` (samples on ``Nt`` equispaced angles).  With the
    ``normalized`` measure the ``t``-integral is the mean over samples, with
    ``lebesgue`` it is ``2 pi`` times the mean.
    """
    F = np.asarray(fs, dtype=complex)
    if F.ndim == 2:
        sq = np.sum(np.abs(F) ** 2, axis=0)
    elif F.ndim == 3:
        sq = np.sum(np.mean(np.abs(F) ** 2, axis=1), axis=0)
        if measure == "lebesgue":
            sq = sq * 2 * np.pi
        elif measure != "normalized":
            raise InvalidSpec(f"unknown measure {measure!r}")
    else:
        raise InvalidSpec("expected samples of shape (K, d) or (K, Nt, d)")
    return float(pnorm(np.sqrt(sq), p))


def shift_witness(n: int, p: float, d: int | None = None) -> dict:
    """Square-function ratio of the power family of the cyclic shift on
    ``delta_0``: ``||(sum_k |U^k delta_0|^2)^{1/2}||_p / ||(sum_k |delta_0|^2)^{1/2}||_p``
    equals ``n^{1/p} / n^{1/2}``."""
    from .zoo import cyclic_shift

    d = d or n
    U = cyclic_shift(d)
    e0 = np.zeros(d, dtype=complex)
    e0[0] = 1.0
    powers = power_family(U, n)
    images = np.einsum("kij,j->ki", powers, e0)
    num = lattice_square_norm(images, p)
    den = lattice_square_norm(np.tile(e0, (n, 1)), p)
    return {"numerator": num, "denominator": den, "ratio": num / den,
            "expected_numerator": n ** (1.0 / p), "expected_ratio": n ** (1.0 / p - 0.5)}


# ------------------------------------------------------------- gamma-GFS


def _gfs_members(A, r, m, rng, n_random, pairs):
    """Members ``(r+1)(r-1)^m int eps(t) R(re^{it})^{m+1} dt`` of the set."""
    from .gfs import normalization, sweep_nodes

    d = A.shape[0]
    N = sweep_nodes(r)
    t = 2 * np.pi * np.arange(N) / N
    P = matrix_powers(resolvent_stack(A, r * np.exp(1j * t)), m + 1)
    w = normalization(r, m) * 2 * np.pi / N
    eps = []
    for blocks in (4, 16, 64)[: max(1, n_random)]:
        phases = np.exp(2j * np.pi * rng.random(blocks))
        eps.append(phases[(np.arange(N) * blocks) // N])
    for x, xs in pairs:
        pv = np.einsum("cij,j->ci", P, x) @ xs
        a = np.abs(pv)
        eps.append(np.where(a > 0, np.conj(pv) / np.where(a > 0, a, 1.0), 1.0))
    E = np.array(eps)
    return w * np.einsum("ec,cij->eij", E, P)


def gamma_gfs_estimate(T, m: int = 1, space: AmbientSpace | None = None, r_grid=None,
                       K: int = 2000, seed: int = 0, n_pairs: int = 4, n_random: int = 3,
                       floors=(1e-1, 1e-2, 1e-3), sizes=(1, 2, 4)) -> ConstantEstimate:
    """Lower-bound estimate for the gamma-bound of the phase-averaged
    resolvent set ``{(r+1)(r-1)^m int eps(t) R(re^{it})^{m+1} dt}``.

    ``eps`` runs over random unimodular step functions and over the phase
    alignments ``conj(p)/|p|`` of ``p(t) = <R^{m+1} x, x*>`` for coordinate
    and seeded Gaussian pairs, which turn the pairing into the probe
    integral.  The bound is estimated separately for members with
    ``r - 1 >= floor`` for every floor, giving the growth classification in
    ``meta["growth"]``.
    """
    from .gfs import default_r_grid

    A = as_matrix(T)
    d = A.shape[0]
    space = space or AmbientSpace.hilbert(d)
    if spectral_radius(A) > 1.0 + 1e-9:
        raise SpectrumOutsideDisk("spectral radius exceeds 1")
    grid = (default_r_grid(points=12, extra=[1 + s for s in floors])
            if r_grid is None else np.asarray(r_grid, dtype=float))
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 11]))
    eye = np.eye(d, dtype=complex)
    pairs = [(eye[i], eye[j]) for i in range(min(d, 2)) for j in range(min(d, 2))]
    for _ in range(n_pairs):
        pairs.append((rng.standard_normal(d) + 1j * rng.standard_normal(d),
                      rng.standard_normal(d) + 1j * rng.standard_normal(d)))
    members, radii = [], []
    for r in grid:
        M = _gfs_members(A, float(r), m, rng, n_random, pairs)
        members.append(M)
        radii.extend([float(r)] * M.shape[0])
    members = np.concatenate(members)
    radii = np.array(radii)
    values = []
    estimates = {}
    for s in sorted(floors, reverse=True):
        sel = radii - 1.0 >= s * (1 - 1e-9)
        est = gamma_bound_of_family(members[sel], space, K=K, seed=seed, sizes=sizes,
                                    selections=2, tuples=2, ascent=1)
        estimates[s] = est
        values.append((1.0 + s, est.value))
    full = gamma_bound_of_family(members, space, K=K, seed=seed, sizes=sizes,
                                 selections=2, tuples=2, ascent=1)
    growth = growth_from_profile(values, sorted(floors, reverse=True))
    out = ConstantEstimate(full.value, f"gamma_gfs_C({m})", "lower", witnesses=full.witnesses,
                           meta={"growth": growth, "members": int(members.shape[0]),
                                 "ambient": space.label(), "K": K, "seed": seed})
    if growth["status"] == "diverging":
        out.flags.append("diverging")
    return out


# ----------------------------------------------------- Fourier characterization


def fourier_resolvent_check(T, r: float, x, K: int = 20, tol: float = 1e-10) -> dict:
    """Fourier coefficients of ``t -> R(re^{it}, T) x`` against the Neumann
    series: ``c_{-(n+1)} = T^n x / r^{n+1}`` for ``n <= K``; coefficients at
    nonnegative frequencies vanish.  Also checks the weight identity
    ``(r^2 - 1) sum_{n >= 0} r^{-2(n+1)} = 1`` by a truncated sum plus its
    exact geometric tail.
    """
    from .powerbound import power_envelope

    A = as_matrix(T)
    x = np.asarray(x, dtype=complex)
    if not r > spectral_radius(A):
        raise InvalidSpec("r must exceed the spectral radius")
    C, q = power_envelope(A, r)
    # aliasing from frequency -(n+1+N) is bounded by C (q/r)^N
    alias = 1 if q == 0 else math.ceil(math.log(1e-17 / max(C, 1.0)) / math.log(q / r))
    N = next_power_of_two(max(64, 2 * (K + 2), alias + K + 2))
    rule = CircleRule(N)

    def g(t):
        return resolvent_stack(A, r * np.exp(1j * t)) @ x

    nx = float(np.linalg.norm(x)) or 1.0
    coeffs = fourier_coefficients(g, rule)
    errors = []
    y = x.copy()
    for n in range(K + 1):
        errors.append(float(np.linalg.norm(coeffs[N - (n + 1)] - y / r ** (n + 1))) / nx)
        y = A @ y
    positive = max(float(np.linalg.norm(coeffs[k])) / nx for k in range(0, min(4, N // 2)))
    L = max(1, math.ceil(-40 / math.log10(r * r)))  # r^{-2L} below 1e-40
    partial = math.fsum((r * r - 1) * r ** (-2 * (n + 1)) for n in range(L))
    tail = r ** (-2 * L)
    weight = partial + tail
    return {
        "max_error": max(errors), "errors": errors, "positive_frequency": positive,
        "nodes": N, "weight_sum": weight, "weight_error": abs(weight - 1.0),
        "holds": max(errors) <= tol and positive <= tol and abs(weight - 1.0) <= 1e-12,
    }
