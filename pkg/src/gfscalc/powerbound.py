"""Power bounds and quadratic resolvent estimates on Hilbert space.

For ``r > spectral_radius(T)`` the Neumann series ``R(re^{it}, T) x =
sum_n T^n x / (re^{it})^{n+1}`` and Parseval give::

    int_0^{2pi} ||R(re^{it}, T) x||^2 dt = 2 pi sum_n ||T^n x||^2 / r^{2(n+1)}

so a power bound ``M`` yields ``(r^2 - 1) int ||R x||^2 <= 2 pi M^2 ||x||^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec
from .estimates import ConstantEstimate
from .linalg import (
    AmbientSpace, as_matrix, batch_norm_lower, operator_norm_upper, resolvent_stack,
    spectral_radius,
)
from .quadrature import CircleRule, circle_integral

HORIZON = 2048
OVERFLOW = 1e150


@dataclass
class PowerBoundReport:
    """``M_measured = max_{0 <= n <= N} ||T^n||``.

    ``certified`` is True when some ``n0 <= N`` has ``||T^{n0}|| <= 1``
    for a certified upper bound of the norm.  Then every later power is a
    product of earlier ones and a power of ``T^{n0}``, so
    ``sup_n ||T^n|| = max_{n < n0} ||T^n||``; for ``p = 2`` this value is
    exact, otherwise ``M_upper`` bounds it.
    """

    M_measured: float
    N: int
    certified: bool
    divergent: bool
    n0: int | None
    M_upper: float
    profile: list[float] = field(default_factory=list)
    milestones: list[tuple[int, float]] = field(default_factory=list)
    quadratic_constants: tuple[float, float] | None = None
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "M_measured": self.M_measured, "N": self.N, "certified": self.certified,
            "divergent": self.divergent, "n0": self.n0, "M_upper": self.M_upper,
            "milestones": self.milestones, "quadratic_constants": self.quadratic_constants,
            "flags": self.flags,
        }


def _upper(A, space):
    return operator_norm_upper(A, space)


def power_bound(T, N: int = HORIZON, space: AmbientSpace | None = None,
                keep_profile: bool = False) -> PowerBoundReport:
    """Measure ``sup_{n <= N} ||T^n||`` and try to certify the supremum.

    Powers are formed sequentially; milestones ``T^{2^j}`` are also formed by
    repeated squaring as an independent cross-check of the sequential
    profile.  The operator is flagged divergent when ``||T^N||`` exceeds
    ``1.5 ||T^{N/2}||`` or a norm overflows.
    """
    if N < 1:
        raise InvalidSpec("horizon must be >= 1")
    A = as_matrix(T)
    d = A.shape[0]
    space = space or AmbientSpace.hilbert(d)
    P = np.eye(d, dtype=complex)
    norms = [1.0]
    uppers = [1.0]
    n0 = None
    divergent = False
    for n in range(1, N + 1):
        P = P @ A
        nv = float(batch_norm_lower(P, space)[0])
        up = nv if space.p in (1.0, 2.0) else _upper(P, space)
        norms.append(nv)
        uppers.append(up)
        if not np.isfinite(nv) or nv > OVERFLOW:
            divergent = True
            break
        if n0 is None and up <= 1.0:
            n0 = n
            break
    measured = max(norms)
    if n0 is not None:
        certified = True
        M_upper = max(uppers[:n0])
    else:
        certified = False
        M_upper = math.inf
        half = norms[len(norms) // 2]
        if not divergent and len(norms) == N + 1 and norms[-1] > 1.5 * half:
            divergent = True
    milestones = []
    Q = A.copy()
    k = 1
    while k <= N:
        milestones.append((k, float(batch_norm_lower(Q, space)[0])))
        if not np.isfinite(milestones[-1][1]) or milestones[-1][1] > OVERFLOW:
            break
        Q = Q @ Q
        k *= 2
    flags = []
    if divergent:
        flags.append("divergent")
    elif not certified:
        flags.append("bounded_up_to_horizon")
    return PowerBoundReport(measured, N, certified, divergent, n0, M_upper,
                            norms if keep_profile else [], milestones, None, flags)


def power_envelope(T, r: float, max_k: int = 4096) -> tuple[float, float]:
    """Constants ``(C, q)`` with ``||T^n|| <= C q^n`` for all ``n`` and ``q < r``.

    Takes the first ``k`` with ``||T^k||^{1/k} < r`` (it exists because
    ``r`` exceeds the spectral radius) and ``C = max_{j<k} ||T^j|| / q^j``.
    For contractions this is ``(1, 1)``.
    """
    A = as_matrix(T)
    P = np.eye(A.shape[0], dtype=complex)
    norms = [1.0]
    for k in range(1, max_k + 1):
        P = P @ A
        nk = float(np.linalg.norm(P, 2))
        if nk ** (1.0 / k) < r:
            q = max(nk ** (1.0 / k), 1e-300)
            if nk == 0.0:
                return max(norms), 0.0
            C = max(nj / q ** j for j, nj in enumerate(norms))
            return max(C, 1.0), q
        norms.append(nk)
    raise InvalidSpec("powers do not decay below r within the search horizon")


def _neumann_terms(A, x, r, C, q_T, tol):
    """``2 pi sum_n ||T^n x||^2 r^{-2(n+1)}`` truncated once the geometric
    tail ``2 pi C^2 ||x||^2 r^{-2} (q_T/r)^{2n} / (1 - (q_T/r)^2)`` drops
    below ``tol/10``."""
    w = r ** -2
    ratio = (q_T / r) ** 2
    nx2 = float(np.vdot(x, x).real)
    total = 0.0
    y = x.astype(complex)
    n = 0
    while True:
        total += float(np.vdot(y, y).real) * w ** (n + 1)
        n += 1
        tail = 2 * np.pi * C * C * nx2 * w * ratio ** n / (1 - ratio)
        if tail < tol / 10 or n > 1_000_000:
            return 2 * np.pi * total, tail, n
        y = A @ y


def plancherel_check(T, r: float, x, tol: float = 1e-12) -> dict:
    """Both sides of the quadratic Fourier identity on Hilbert space.

    The left side is a circle integral; the right side a Neumann series with
    an explicit geometric tail from :func:`power_envelope` (for a power
    bounded ``T`` the envelope is ``M q^n`` with ``q <= 1``).
    """
    A = as_matrix(T)
    if not r > spectral_radius(A):
        raise InvalidSpec("r must exceed the spectral radius")
    x = np.asarray(x, dtype=complex)
    C, q_T = power_envelope(A, r)

    def g(t):
        R = resolvent_stack(A, r * np.exp(1j * t))
        y = R @ x
        return np.sum(np.abs(y) ** 2, axis=1)

    lhs = float(circle_integral(g, CircleRule(tol=1e-14)).value)
    rhs, tail, terms = _neumann_terms(A, x, r, C, q_T, tol)
    return {"lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs), "tail_bound": tail, "terms": terms}


def resolvent_gram(T, r: float, adjoint: bool = False, tol: float = 1e-13) -> np.ndarray:
    """``int_0^{2pi} R^H R dt`` (or ``R R^H`` for the adjoint side)."""
    A = as_matrix(T)

    def g(t):
        R = resolvent_stack(A, r * np.exp(1j * t))
        Rh = np.conj(np.swapaxes(R, -1, -2))
        return R @ Rh if adjoint else Rh @ R

    return circle_integral(g, CircleRule(n=max(64, 1 << math.ceil(math.log2(16 / (r - 1)))),
                                         tol=tol)).value


def hilbert_quadratic_constant(T, r_grid=None, samples: int = 32, seed: int = 0) -> dict:
    """``C_forward = sup_r (r^2-1) sup_x int ||R x||^2 / ||x||^2`` and the
    same for the adjoint ``T^*``.

    For a fixed ``r`` the inner supremum over ``x`` is the top eigenvalue of
    the Gram matrix ``int R^H R dt``, so each radius is exact up to
    quadrature; sampled unit vectors are evaluated too and must stay below
    the eigenvalue.  The supremum over ``r`` is taken on the grid, giving a
    lower bound overall.
    """
    from .gfs import default_r_grid

    A = as_matrix(T)
    d = A.shape[0]
    grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((d, samples)) + 1j * rng.standard_normal((d, samples))
    X /= np.linalg.norm(X, axis=0)
    rows = []
    for r in grid:
        r = float(r)
        Gf = resolvent_gram(A, r)
        Ga = resolvent_gram(A, r, adjoint=True)
        ef = float(np.linalg.eigvalsh(0.5 * (Gf + Gf.conj().T))[-1])
        ea = float(np.linalg.eigvalsh(0.5 * (Ga + Ga.conj().T))[-1])
        sampled = float(np.max(np.real(np.einsum("ds,de,es->s", X.conj(), Gf, X))))
        rows.append({"r": r, "forward": (r * r - 1) * ef, "adjoint": (r * r - 1) * ea,
                     "sampled_forward": (r * r - 1) * sampled})
    jf = max(range(len(rows)), key=lambda i: rows[i]["forward"])
    ja = max(range(len(rows)), key=lambda i: rows[i]["adjoint"])
    return {
        "C_forward": ConstantEstimate(rows[jf]["forward"], "quadratic_forward", "lower",
                                      witnesses=[{"r": rows[jf]["r"]}]),
        "C_adjoint": ConstantEstimate(rows[ja]["adjoint"], "quadratic_adjoint", "lower",
                                      witnesses=[{"r": rows[ja]["r"]}]),
        "profile": rows,
    }
