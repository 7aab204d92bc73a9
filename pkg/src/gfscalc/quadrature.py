"""Circle and radial quadrature.

Circle integrals over ``t in [0, 2pi)`` use the periodic trapezoid rule with
node doubling; every doubling reuses the old nodes, so the sequence
``N, 2N, 4N, ...`` costs one full evaluation overall.  Radial integrals over
``(a, inf)`` are mapped to ``(0, 1)`` by ``r = a/u`` and integrated with
globally adaptive Gauss-Legendre panels.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FrequencyOutOfRange, NodeEvaluationFailure, NonConvergence

CIRCLE_TOL = 1e-10
CIRCLE_NMAX = 2**20
RADIAL_TOL = 1e-9
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class CircleRule:
    """Equispaced nodes ``t_j = 2 pi j / N`` with weights ``2 pi / N``.

    ``n`` is the starting node count; adaptive integration doubles it up to
    ``n_max`` until two successive values agree to ``tol``.
    """

    n: int = 64
    tol: float = CIRCLE_TOL
    n_max: int = CIRCLE_NMAX

    def __post_init__(self):
        if self.n < 64 or self.n & (self.n - 1):
            raise ValueError("node count must be a power of two >= 64")
        if self.n_max < self.n:
            raise ValueError("n_max must be at least n")

    @property
    def nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n, TWO_PI / self.n)


@dataclass
class IntegralResult:
    value: object
    error: float
    n: int
    converged: bool


def _evaluate(g, t):
    v = np.asarray(g(t))
    if v.shape[:1] != t.shape:
        raise ValueError("integrand must return one value per node along axis 0")
    if not np.all(np.isfinite(v)):
        raise NodeEvaluationFailure("integrand returned non-finite values")
    return v


def _size(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def next_power_of_two(n: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1.0))))


def circle_integral(g: Callable, rule: CircleRule | None = None, adaptive: bool = True,
                    strict: bool = False) -> IntegralResult:
    """``int_0^{2pi} g(t) dt`` by the periodic trapezoid rule.

    ``g`` maps an array of angles of shape ``(N,)`` to values of shape
    ``(N, ...)``; scalars, vectors and matrices are all allowed.  The
    doubling stops once successive values differ by at most
    ``tol * max(|I|, int |g|)`` in max norm.  ``SingularResolvent`` raised by
    ``g`` propagates unchanged.
    """
    rule = rule or CircleRule()
    n = rule.n
    t = TWO_PI * np.arange(n) / n
    vals = _evaluate(g, t)
    total = vals.sum(axis=0)
    mass = np.abs(vals).sum(axis=0)
    value = total * (TWO_PI / n)
    if not adaptive:
        return IntegralResult(value, math.nan, n, True)
    err = math.inf
    while 2 * n <= rule.n_max:
        mid = TWO_PI * (np.arange(n) + 0.5) / n
        mvals = _evaluate(g, mid)
        total = total + mvals.sum(axis=0)
        mass = mass + np.abs(mvals).sum(axis=0)
        n *= 2
        new = total * (TWO_PI / n)
        err = _size(new - value)
        value = new
        scale = max(_size(value), _size(mass) * TWO_PI / n)
        if err <= rule.tol * scale:
            return IntegralResult(value, err, n, True)
    if strict:
        raise NonConvergence(f"circle rule did not converge with {n} nodes (change {err:.3e})")
    return IntegralResult(value, err, n, False)


def fourier_coefficient(g: Callable, n: int, rule: CircleRule | None = None):
    """``c_n(g) = (1/2pi) int g(t) e^{-int} dt`` on ``rule.n`` nodes.

    Exact for band-limited ``g`` whose frequencies are below ``N/2`` in
    modulus.
    """
    rule = rule or CircleRule()
    N = rule.n
    if abs(n) > N // 2 - 1:
        raise FrequencyOutOfRange(f"|n|={abs(n)} exceeds N/2 - 1 = {N // 2 - 1}")
    t = rule.nodes
    vals = _evaluate(g, t)
    phase = np.exp(-1j * n * t).reshape((N,) + (1,) * (vals.ndim - 1))
    return (vals * phase).sum(axis=0) / N


def fourier_coefficients(g: Callable, rule: CircleRule | None = None) -> np.ndarray:
    """All discrete coefficients by FFT; entry ``k`` is frequency ``k`` for
    ``k < N/2`` and ``k - N`` above."""
    rule = rule or CircleRule()
    vals = _evaluate(g, rule.nodes)
    return np.fft.fft(vals, axis=0) / rule.n


# ---------------------------------------------------------------- radial


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(order: int):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


@dataclass(frozen=True)
class RadialRule:
    """Adaptive Gauss-Legendre panels on ``(0, 1)`` after ``r = a/u``."""

    order: int = 20
    tol: float = RADIAL_TOL
    abs_tol: float = 1e-15
    max_panels: int = 400
    initial_panels: int = 4


def _panel(h, a, b, x, w):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = np.concatenate([mid + half * x,
                            a + 0.5 * half * (x + 1.0),
                            mid + 0.5 * half * (x + 1.0)])
    vals = _evaluate(h, nodes)
    n = x.size
    shape = (n,) + (1,) * (vals.ndim - 1)
    w = w.reshape(shape)
    whole = half * (vals[:n] * w).sum(axis=0)
    halves = 0.5 * half * ((vals[n:2 * n] * w).sum(axis=0) + (vals[2 * n:] * w).sum(axis=0))
    return halves, _size(halves - whole)


def gauss_legendre_adaptive(h: Callable, a: float, b: float,
                            rule: RadialRule | None = None, strict: bool = False) -> IntegralResult:
    """Globally adaptive Gauss-Legendre on a finite interval.

    Each panel is integrated whole and as two halves; the difference is its
    error estimate.  The worst panel is bisected until the summed estimate
    falls below ``max(tol |I|, abs_tol)``.
    """
    rule = rule or RadialRule()
    x, w = _gauss_legendre(rule.order)
    edges = np.linspace(a, b, rule.initial_panels + 1)
    heap = []
    counter = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _panel(h, lo, hi, x, w)
        heap.append((-err, counter, lo, hi, val))
        counter += 1
    heapq.heapify(heap)
    while True:
        total = sum(item[4] for item in heap)
        err = sum(-item[0] for item in heap)
        if err <= max(rule.tol * _size(total), rule.abs_tol):
            return IntegralResult(total, err, len(heap), True)
        if len(heap) >= rule.max_panels:
            break
        _, _, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        for sub in ((lo, mid), (mid, hi)):
            val, e = _panel(h, sub[0], sub[1], x, w)
            heapq.heappush(heap, (-e, counter, sub[0], sub[1], val))
            counter += 1
    if strict:
        raise NonConvergence(f"radial rule stopped at {len(heap)} panels with error {err:.3e}")
    return IntegralResult(total, err, len(heap), False)


def radial_integral(h: Callable, rule: RadialRule | None = None, lower: float = 1.0,
                    strict: bool = False) -> IntegralResult:
    """``int_lower^inf h(r) dr`` through ``r = lower/u``, ``dr = lower/u^2 du``.

    ``h`` must be vectorized over an array of radii and decay at least like
    ``r^{-2}`` so that the mapped integrand stays bounded at ``u = 0``.
    """
    if lower <= 0:
        raise ValueError("lower limit must be positive")

    def mapped(u):
        r = lower / u
        v = np.asarray(h(r))
        jac = (lower / (u * u)).reshape(u.shape + (1,) * (v.ndim - 1))
        return v * jac

    return gauss_legendre_adaptive(mapped, 0.0, 1.0, rule, strict)
