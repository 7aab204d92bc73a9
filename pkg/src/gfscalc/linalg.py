"""Dense complex linear algebra: norms, pairings, resolvents.

Matrices are plain ``numpy`` complex arrays of shape ``(d, d)``; vectors are
arrays of shape ``(d,)``.  The ambient norm lives in :class:`AmbientSpace`.
All functions are pure.

The duality pairing is bilinear, ``<x, x*> = sum_j x_j x*_j``, so the Banach
adjoint of ``A`` is its plain transpose.  Hilbert inner-product semantics
are obtained by conjugating the dual vector at the call site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import InvalidSpec, NonConvergence, SingularResolvent, UnsupportedExponent
from .estimates import ConstantEstimate

EPS = np.finfo(float).eps
# refuse solves whose reciprocal condition number falls below this
RCOND_MIN = 1e3 * EPS


@dataclass(frozen=True)
class AmbientSpace:
    """``l^p_d`` or Hilbert ``l^2_d``.

    ``Hilbert`` and ``Lp(2)`` give identical norms; the flag only unlocks
    exact formulas (closed-form Gaussian norms, Gram-matrix suprema).
    """

    dim: int
    norm_kind: str = "hilbert"
    p: float = 2.0

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidSpec("dimension must be positive")
        if self.norm_kind not in ("hilbert", "lp"):
            raise InvalidSpec(f"unknown norm kind {self.norm_kind!r}")
        if self.norm_kind == "hilbert" and self.p != 2.0:
            raise InvalidSpec("Hilbert space has p = 2")
        if not (1.0 <= self.p < math.inf):
            raise UnsupportedExponent(f"p must lie in [1, inf), got {self.p}")

    @classmethod
    def hilbert(cls, dim: int) -> "AmbientSpace":
        return cls(dim, "hilbert", 2.0)

    @classmethod
    def lp(cls, dim: int, p: float) -> "AmbientSpace":
        return cls(dim, "lp", float(p))

    @classmethod
    def parse(cls, text: str, dim: int) -> "AmbientSpace":
        """Parse ``"hilbert"`` or ``"lp:<p>"``."""
        text = text.strip().lower()
        if text in ("hilbert", "l2"):
            return cls.hilbert(dim)
        if text.startswith("lp:"):
            return cls.lp(dim, float(text[3:]))
        raise InvalidSpec(f"cannot parse ambient space {text!r}")

    @property
    def is_hilbert(self) -> bool:
        return self.norm_kind == "hilbert"

    @property
    def q(self) -> float:
        """Dual exponent, ``1/p + 1/q = 1``."""
        if self.p == 1.0:
            return math.inf
        return self.p / (self.p - 1.0)

    def with_dim(self, dim: int) -> "AmbientSpace":
        return AmbientSpace(dim, self.norm_kind, self.p)

    def label(self) -> str:
        return "hilbert" if self.is_hilbert else f"lp:{self.p:g}"


def as_matrix(T) -> np.ndarray:
    """Validate and return ``T`` as a square finite complex array."""
    A = np.asarray(T, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidSpec(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidSpec("matrix has non-finite entries")
    return A


def spectral_radius(T) -> float:
    A = as_matrix(T)
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def pnorm(x, p: float, axis: int = -1) -> np.ndarray:
    """l^p norm along ``axis``; ``p = inf`` gives the max norm."""
    a = np.abs(np.asarray(x))
    if p == math.inf:
        return np.max(a, axis=axis)
    if p == 1.0:
        return np.sum(a, axis=axis)
    if p == 2.0:
        return np.sqrt(np.sum(a * a, axis=axis))
    # scale first so large entries do not overflow |x|^p
    scale = np.max(a, axis=axis, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    s = np.sum((a / safe) ** p, axis=axis) ** (1.0 / p)
    return s * np.squeeze(safe, axis=axis)


def vector_norm(x, space: AmbientSpace) -> float:
    """Norm of ``x`` in the ambient space."""
    if space.p < 1.0:
        raise UnsupportedExponent("p < 1 is not a norm")
    return float(pnorm(x, space.p))


def dual_norm(xstar, space: AmbientSpace) -> float:
    """Norm of a dual vector in ``l^q``."""
    return float(pnorm(xstar, space.q))


def pairing(x, xstar) -> complex:
    """Bilinear duality pairing ``sum_j x_j x*_j``."""
    return complex(np.sum(np.asarray(x) * np.asarray(xstar)))


def _check_rcond(rcond: float, lam) -> None:
    if not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise SingularResolvent(
            f"lambda I - T is numerically singular at lambda={lam!r} (rcond={rcond:.3e})",
            lam=lam,
            rcond=rcond,
        )


class ResolventFactor:
    """Pivoted LU factorization of ``lambda I - T`` reused across solves."""

    def __init__(self, T, lam: complex):
        A = as_matrix(T)
        d = A.shape[0]
        self.lam = complex(lam)
        M = self.lam * np.eye(d, dtype=complex) - A
        anorm = np.max(np.sum(np.abs(M), axis=0))
        lu, piv, info = lapack.zgetrf(M)
        if info > 0:
            raise SingularResolvent(
                f"zero pivot in LU of lambda I - T at lambda={lam!r}", lam=lam, rcond=0.0
            )
        rcond, _ = lapack.zgecon(lu, anorm, norm="1")
        _check_rcond(float(rcond), lam)
        self.rcond = float(rcond)
        self._lu = (lu, piv)

    def solve(self, x, k: int = 1) -> np.ndarray:
        """Return ``R(lambda, T)^k x`` by ``k`` successive triangular solves."""
        if k < 1:
            raise ValueError("k must be >= 1")
        y = np.asarray(x, dtype=complex)
        for _ in range(k):
            y = scipy.linalg.lu_solve(self._lu, y, check_finite=False)
        return y

    def matrix(self) -> np.ndarray:
        return self.solve(np.eye(self._lu[0].shape[0], dtype=complex))


def resolvent(T, lam: complex) -> np.ndarray:
    """``R(lambda, T) = (lambda I - T)^{-1}`` via pivoted LU."""
    return ResolventFactor(T, lam).matrix()


def resolvent_power_apply(T, lam: complex, k: int, x) -> np.ndarray:
    """``R(lambda, T)^k x`` with one factorization and ``k`` solves."""
    return ResolventFactor(T, lam).solve(x, k)


def resolvent_stack(T, lams) -> np.ndarray:
    """Resolvents at many points, shape ``(len(lams), d, d)``.

    Batched LAPACK ``gesv`` (LU with partial pivoting).  The exact 1-norm
    condition number ``||A||_1 ||A^{-1}||_1`` of every shifted matrix is
    checked against the same threshold as :func:`resolvent`.
    """
    A = as_matrix(T)
    d = A.shape[0]
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    eye = np.eye(d, dtype=complex)
    M = lams[:, None, None] * eye - A
    try:
        R = np.linalg.solve(M, np.broadcast_to(eye, M.shape))
    except np.linalg.LinAlgError as exc:
        dets = np.abs(np.linalg.det(M))
        bad = lams[int(np.argmin(dets))]
        raise SingularResolvent(f"singular resolvent near lambda={bad!r}", lam=bad, rcond=0.0) from exc
    cond = np.max(np.sum(np.abs(M), axis=1), axis=-1) * np.max(np.sum(np.abs(R), axis=1), axis=-1)
    rcond = 1.0 / cond
    worst = int(np.argmin(rcond))
    _check_rcond(float(rcond[worst]), lams[worst])
    return R


def matrix_powers(R: np.ndarray, k: int) -> np.ndarray:
    """Batched ``R^k`` for a stack of matrices."""
    out = R
    for _ in range(k - 1):
        out = out @ R
    return out


def spectral_norms(stack) -> np.ndarray:
    """Largest singular value of each matrix in a stack (LAPACK SVD)."""
    S = np.asarray(stack, dtype=complex)
    if S.ndim == 2:
        S = S[None]
    return np.linalg.svd(S, compute_uv=False)[..., 0]


def _hilbert_norm(A, tol, max_iter, seed):
    d = A.shape[0]
    G = A.conj().T @ A
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    rq_old = -1.0
    for it in range(1, max_iter + 1):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, True, it, v
        rq = float(np.real(np.vdot(v, w)))
        v = w / nw
        if abs(rq - rq_old) <= tol * max(rq, 1e-300):
            return math.sqrt(max(rq, 0.0)), True, it, v
        rq_old = rq
    return math.sqrt(max(rq_old, 0.0)), False, max_iter, v


def _dual_map(z, p):
    """``x`` on the unit l^p sphere that maximizes Re sum conj(z_j) x_j."""
    a = np.abs(z)
    if p == math.inf:
        raise UnsupportedExponent("max norm is not supported")
    q = math.inf if p == 1.0 else p / (p - 1.0)
    if q == math.inf:
        x = np.zeros_like(z)
        j = int(np.argmax(a))
        x[j] = z[j] / a[j] if a[j] > 0 else 1.0
        return x
    phase = np.where(a > 0, z / np.where(a > 0, a, 1.0), 0.0)
    x = phase * a ** (q - 1.0)
    n = pnorm(x, p)
    return x / n if n > 0 else x


def _lp_norm_lower(A, p, restarts, max_iter, seed):
    d = A.shape[0]
    q = p / (p - 1.0)
    rng = np.random.default_rng(seed)
    starts = [np.eye(d, dtype=complex)[j] for j in range(min(d, restarts))]
    starts.append(np.ones(d, dtype=complex))
    for _ in range(restarts):
        starts.append(rng.standard_normal(d) + 1j * rng.standard_normal(d))
    best, best_x, all_converged = 0.0, starts[0], True
    for x in starts:
        x = x / pnorm(x, p)
        val = float(pnorm(A @ x, p))
        converged = False
        for _ in range(max_iter):
            y = A @ x
            ny = pnorm(y, p)
            if ny == 0.0:
                converged = True
                break
            # ascent direction T^H J_p(y); J_p is the normalized duality map
            g = A.conj().T @ _dual_map(y, q)
            x_new = _dual_map(g, p)
            val_new = float(pnorm(A @ x_new, p))
            if val_new <= val * (1.0 + 1e-14):
                converged = True
                break
            x, val = x_new, val_new
        all_converged &= converged
        if val > best:
            best, best_x = val, x
    return best, all_converged, best_x


def operator_norm(
    T,
    space: AmbientSpace,
    tol: float = 1e-14,
    max_iter: int = 5000,
    restarts: int = 8,
    seed: int = 0,
    strict: bool = False,
) -> ConstantEstimate:
    """Operator norm of ``T`` on the ambient space.

    p = 2: power iteration on ``T^H T`` with a Rayleigh-quotient stopping
    rule, reported ``two_sided`` once converged.  p = 1: exact maximal column
    sum.  Other p: multi-start ascent on the unit sphere (generalized power
    method), reported as a ``lower`` bound.
    """
    A = as_matrix(T)
    p = space.p
    if p == 2.0:
        val, ok, iters, v = _hilbert_norm(A, tol, max_iter, seed)
        est = ConstantEstimate(
            val, "operator_norm", "two_sided" if ok else "lower",
            witnesses=[{"x": v}], converged=ok, meta={"iterations": iters},
        )
    elif p == 1.0:
        cols = np.sum(np.abs(A), axis=0)
        j = int(np.argmax(cols))
        est = ConstantEstimate(float(cols[j]), "operator_norm", "two_sided",
                               witnesses=[{"x": np.eye(A.shape[0])[j]}])
    else:
        val, ok, x = _lp_norm_lower(A, p, restarts, 200, seed)
        est = ConstantEstimate(val, "operator_norm", "lower", witnesses=[{"x": x}], converged=ok)
    if not est.converged:
        est.flags.append("nonconvergence")
        if strict:
            raise NonConvergence(f"operator norm iteration did not converge (best {est.value:.6g})")
    return est


def operator_norm_upper(T, space: AmbientSpace) -> float:
    """Certified upper bound: exact for p = 1, 2; Riesz-Thorin otherwise."""
    A = as_matrix(T)
    if space.p == 2.0:
        return float(np.linalg.norm(A, 2))
    n1 = float(np.max(np.sum(np.abs(A), axis=0)))
    if space.p == 1.0:
        return n1
    ninf = float(np.max(np.sum(np.abs(A), axis=1)))
    th = 1.0 / space.p
    return n1 ** th * ninf ** (1.0 - th)


def conjugate(S, U) -> np.ndarray:
    """``U S U^{-1}``."""
    S = as_matrix(S)
    U = as_matrix(U)
    rcond = 1.0 / np.linalg.cond(U, 1)
    if not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise SingularResolvent("similarity U is numerically singular", rcond=float(rcond))
    US = U @ S
    # (U S) U^{-1} = (U^{-T} (U S)^T)^T
    return np.linalg.solve(U.T, US.T).T


def inverse(U) -> np.ndarray:
    U = as_matrix(U)
    rcond = 1.0 / np.linalg.cond(U, 1)
    if not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise SingularResolvent("matrix is numerically singular", rcond=float(rcond))
    return np.linalg.solve(U, np.eye(U.shape[0], dtype=complex))


def check_spectral_distance(T, lams) -> None:
    """Refuse points closer to the spectrum than ``1e3 eps ||T||``.

    Guard for batched solves that skip the per-point condition estimate.
    """
    A = as_matrix(T)
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    ev = np.linalg.eigvals(A)
    scale = max(float(np.linalg.norm(A, 2)), 1.0)
    dist = np.min(np.abs(lams[:, None] - ev[None, :]), axis=1)
    j = int(np.argmin(dist))
    if dist[j] <= 1e3 * EPS * scale:
        raise SingularResolvent(f"lambda={lams[j]!r} lies on the spectrum", lam=lams[j], rcond=0.0)


def resolvent_apply_stack(T, lams, k: int, X, transpose: bool = False) -> np.ndarray:
    """``R(lambda_j, T)^k X`` for every point, shape ``(len(lams),) + X.shape``.

    ``X`` is a vector or a ``(d, s)`` block.  With ``transpose`` the
    transposed resolvent ``R(lambda, T)^T`` is applied instead, which is the
    Banach adjoint for the bilinear pairing.
    """
    A = as_matrix(T)
    if transpose:
        A = A.T
    d = A.shape[0]
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    check_spectral_distance(A, lams)
    M = lams[:, None, None] * np.eye(d, dtype=complex) - A
    X = np.asarray(X, dtype=complex)
    vec = X.ndim == 1
    Y = np.broadcast_to(X.reshape(d, -1), (lams.size, d, X.reshape(d, -1).shape[1]))
    for _ in range(k):
        Y = np.linalg.solve(M, Y)
    return Y[..., 0] if vec else Y


def batch_norm_lower(stack, space: AmbientSpace, n_random: int = 8, seed: int = 0) -> np.ndarray:
    """Operator norms of a stack of matrices.

    Exact for p = 2 (SVD) and p = 1 (column sums).  For other p the value is
    the largest ratio ``||A v||_p / ||v||_p`` over basis vectors, the all-ones
    vector and ``n_random`` seeded Gaussian vectors: a lower bound.
    """
    S = np.asarray(stack, dtype=complex)
    if S.ndim == 2:
        S = S[None]
    if space.p == 2.0:
        return spectral_norms(S)
    if space.p == 1.0:
        return np.max(np.sum(np.abs(S), axis=-2), axis=-1)
    d = S.shape[-1]
    rng = np.random.default_rng(seed)
    V = np.concatenate([np.eye(d), np.ones((d, 1)),
                        rng.standard_normal((d, n_random)) + 1j * rng.standard_normal((d, n_random))],
                       axis=1)
    V = V / pnorm(V, space.p, axis=0)
    return np.max(pnorm(S @ V, space.p, axis=-2), axis=-1)
