"""Analytic functions on disks: polynomials and truncated power series.

Both kinds store Taylor coefficients at 0 and evaluate by Horner's rule.
Derivatives act exactly on coefficients.  Circle suprema use an FFT grid
followed by golden-section refinement around the largest grid maxima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, RadiusExceeded

DEFAULT_GRID = 4096
DEFAULT_SERIES_LENGTH = 256
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _coeff_array(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.ndim != 1:
        raise InvalidSpec("coefficients must be one-dimensional")
    if c.size == 0:
        c = np.zeros(1, dtype=complex)
    if not np.all(np.isfinite(c)):
        raise InvalidSpec("coefficients must be finite")
    return c


def horner(coeffs, z):
    """Evaluate ``sum_k c_k z^k`` at array ``z`` by Horner's rule."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        out = out * z + c
    return out


def falling_factorial(n: int, m: int) -> float:
    """``n (n-1) ... (n-m+1)``; zero when ``m > n``."""
    if m > n:
        return 0.0
    out = 1.0
    for j in range(m):
        out *= n - j
    return out


def _derivative_coeffs(c: np.ndarray, m: int) -> np.ndarray:
    if m == 0:
        return c.copy()
    n = c.size
    if m >= n:
        return np.zeros(1, dtype=complex)
    k = np.arange(m, n)
    fac = np.ones(n - m)
    for j in range(m):
        fac *= k - j
    return c[m:] * fac


class Polynomial:
    """Polynomial ``c_0 + c_1 z + ... + c_N z^N`` with trailing zeros removed."""

    kind = "poly"
    radius = math.inf

    def __init__(self, coeffs):
        c = _coeff_array(coeffs)
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)

    @classmethod
    def monomial(cls, n: int, scale: complex = 1.0) -> "Polynomial":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = scale
        return cls(c)

    @property
    def degree(self) -> int:
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return 0
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, z):
        return horner(self.coeffs, z)

    def derivative(self, m: int = 1) -> "Polynomial":
        if m < 0:
            raise ValueError("derivative order must be >= 0")
        return Polynomial(_derivative_coeffs(self.coeffs, m))

    def truncated(self) -> "Polynomial":
        return self

    def tail_bound(self, rho: float) -> float:
        return 0.0

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=complex)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return Polynomial(c)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __repr__(self):
        return f"Polynomial(degree={self.degree})"

    def to_dict(self) -> dict:
        return {"kind": "poly", "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}


class PowerSeriesFunction:
    """Power series truncated to ``len(coeffs)`` terms.

    ``majorant`` is a constant ``M`` with ``|c_k| <= M radius^{-k}`` for every
    ``k``, including the discarded tail.  When it is supplied the tail
    ``sum_{k >= L} |c_k| rho^k`` has a certified geometric bound for every
    ``rho < radius``.  Without it the majorant is estimated from the stored
    coefficients and ``certified`` is False.
    """

    kind = "series"

    def __init__(self, coeffs, radius: float, majorant: float | None = None):
        c = _coeff_array(coeffs)
        if not radius > 0:
            raise InvalidSpec("radius must be positive")
        self.coeffs = c
        self.radius = float(radius)
        k = np.arange(c.size)
        if majorant is None:
            with np.errstate(over="ignore"):
                self.majorant = float(np.max(np.abs(c) * self.radius ** k))
            self.certified = False
        else:
            self.majorant = float(majorant)
            self.certified = True

    @classmethod
    def geometric(cls, a: complex, length: int = DEFAULT_SERIES_LENGTH) -> "PowerSeriesFunction":
        """``1 / (1 - a z) = sum a^k z^k`` with radius ``1/|a|``."""
        a = complex(a)
        c = a ** np.arange(length)
        return cls(c, 1.0 / abs(a), majorant=1.0)

    @property
    def length(self) -> int:
        return self.coeffs.size

    def _check(self, rho: float) -> None:
        if rho >= self.radius:
            raise RadiusExceeded(f"radius {rho} is outside the disk of radius {self.radius}")

    def __call__(self, z):
        a = np.max(np.abs(np.asarray(z)), initial=0.0)
        self._check(float(a))
        return horner(self.coeffs, z)

    def tail_bound(self, rho: float) -> float:
        """Bound on ``sum_{k >= L} |c_k| rho^k``."""
        self._check(rho)
        q = rho / self.radius
        return self.majorant * q ** self.length / (1.0 - q)

    def derivative(self, m: int = 1) -> "PowerSeriesFunction":
        """Exact coefficient derivative.

        The majorant is transported to the slightly smaller radius
        ``0.99 * radius`` per differentiation, which keeps the tail bound
        certified.
        """
        if m < 0:
            raise ValueError("derivative order must be >= 0")
        out = self
        for _ in range(m):
            s = 0.99
            peak = max(1.0, math.exp(-1.0) / (s * -math.log(s)))
            new_radius = s * out.radius
            new = PowerSeriesFunction(_derivative_coeffs(out.coeffs, 1), new_radius,
                                      majorant=out.majorant / out.radius * peak)
            new.certified = out.certified
            out = new
        return out

    def truncated(self) -> Polynomial:
        return Polynomial(self.coeffs)

    def __repr__(self):
        return f"PowerSeriesFunction(length={self.length}, radius={self.radius:g})"

    def to_dict(self) -> dict:
        return {
            "kind": "series",
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "radius": self.radius,
        }


AnalyticFunction = Polynomial | PowerSeriesFunction


def derivative(f: AnalyticFunction, m: int) -> AnalyticFunction:
    """Exact ``m``-th derivative at coefficient level."""
    return f.derivative(m)


def function_from_dict(data: dict) -> AnalyticFunction:
    """Parse the function JSON format ``{"kind", "coeffs", "radius"}``."""
    try:
        kind = data["kind"]
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed function description: {exc}") from exc
    if kind == "poly":
        return Polynomial(coeffs)
    if kind == "series":
        if "radius" not in data:
            raise InvalidSpec("series requires a radius")
        return PowerSeriesFunction(coeffs, float(data["radius"]), data.get("majorant"))
    raise InvalidSpec(f"unknown function kind {kind!r}")


@dataclass
class CircleSup:
    """Supremum of ``|f|`` on a circle together with its location."""

    value: float
    t_max: float
    grid: int
    refined: bool
    tail: float = 0.0


def _grid_values(C: np.ndarray, grid: int) -> np.ndarray:
    """``sum_k C[b, k] e^{i k t_j}`` on ``t_j = 2 pi j / grid``."""
    B, L = C.shape
    if L > grid:
        folded = np.zeros((B, grid), dtype=complex)
        for start in range(0, L, grid):
            block = C[:, start:start + grid]
            folded[:, : block.shape[1]] += block
        C = folded
    return np.fft.ifft(C, n=grid, axis=1) * grid


def _horner_rows(C: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Row-wise Horner: polynomial ``C[b]`` evaluated at ``z[b, :]``."""
    out = np.repeat(C[:, -1:], z.shape[1], axis=1)
    for k in range(C.shape[1] - 2, -1, -1):
        out = out * z + C[:, k:k + 1]
    return out


def batch_circle_sup(coeff_rows, rho, grid: int = DEFAULT_GRID, refine: int = 3,
                     iterations: int = 50):
    """Circle suprema for a batch of coefficient rows.

    Parameters
    ----------
    coeff_rows : array (B, L)
        Taylor coefficients, one polynomial per row.
    rho : float or array (B,)
        Radius for each row.
    grid : int
        Number of equispaced angles in the initial scan.
    refine : int
        How many of the largest local grid maxima are polished by golden
        section search.

    Returns
    -------
    values, t_max : arrays (B,)
    """
    C = np.atleast_2d(np.asarray(coeff_rows, dtype=complex))
    B, L = C.shape
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (B,))
    scaled = C * rho[:, None] ** np.arange(L)
    vals = np.abs(_grid_values(scaled, grid))
    dt = 2.0 * np.pi / grid
    best = np.max(vals, axis=1)
    t_best = np.argmax(vals, axis=1) * dt
    if refine <= 0 or L <= 1:
        return best, t_best
    left = np.roll(vals, 1, axis=1)
    right = np.roll(vals, -1, axis=1)
    peaks = np.where((vals >= left) & (vals >= right), vals, -np.inf)
    K = min(refine, grid)
    idx = np.argpartition(-peaks, K - 1, axis=1)[:, :K]
    a = idx * dt - dt
    b = idx * dt + dt

    def f(t):
        return np.abs(_horner_rows(scaled, np.exp(1j * t)))

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        keep_left = fc > fd
        b = np.where(keep_left, d, b)
        a = np.where(keep_left, a, c)
        new_c = b - _GOLDEN * (b - a)
        new_d = a + _GOLDEN * (b - a)
        # reuse the surviving interior point
        d_next = np.where(keep_left, c, new_d)
        c_next = np.where(keep_left, new_c, d)
        fd_next = np.where(keep_left, fc, np.nan)
        fc_next = np.where(keep_left, np.nan, fd)
        c, d = c_next, d_next
        need_c = np.isnan(fc_next)
        need_d = np.isnan(fd_next)
        fc = np.where(need_c, f(c), fc_next)
        fd = np.where(need_d, f(d), fd_next)
    tm = 0.5 * (a + b)
    fm = f(tm)
    j = np.argmax(fm, axis=1)
    rows = np.arange(B)
    refined = fm[rows, j]
    better = refined > best
    best = np.where(better, refined, best)
    t_best = np.where(better, np.mod(tm[rows, j], 2 * np.pi), t_best)
    return best, t_best


def circle_sup(f: AnalyticFunction, rho: float, grid: int = DEFAULT_GRID,
               refine: int = 3) -> CircleSup:
    """Detailed supremum of ``|f(rho e^{it})|`` over ``t``."""
    if rho < 0:
        raise ValueError("radius must be nonnegative")
    tail = 0.0
    if isinstance(f, PowerSeriesFunction):
        f._check(rho)
        tail = f.tail_bound(rho)
    v, t = batch_circle_sup(f.coeffs[None, :], rho, grid=grid, refine=refine)
    return CircleSup(float(v[0]), float(t[0]), grid, refine > 0, tail)


def sup_norm_on_circle(f: AnalyticFunction, rho: float, grid: int = DEFAULT_GRID) -> float:
    """``sup_t |f(rho e^{it})|``, which by maximum modulus is the H^infinity
    norm on the disk of radius ``rho``.  For series the value is that of the
    truncation; :func:`circle_sup` also reports the certified tail."""
    return circle_sup(f, rho, grid).value


def cauchy_bound(f: AnalyticFunction, m: int, r: float, rho: float) -> float:
    """Cauchy-inequality bound ``m!/(r - rho)^m ||f||_{H^inf(r D)}`` on
    ``||f^{(m)}||_{H^inf(rho D)}``."""
    if not rho < r:
        raise ValueError("need rho < r")
    if r > f.radius:
        raise RadiusExceeded(f"r={r} exceeds the radius {f.radius}")
    return math.factorial(m) / (r - rho) ** m * sup_norm_on_circle(f, r)


def random_polynomial(rng: np.random.Generator, degree: int, profile: str = "flat") -> Polynomial:
    """Complex Gaussian coefficients with a variance profile.

    ``flat``: unit variance; ``harmonic``: variance ``1/(k+1)``;
    ``fejer``: Fejer-kernel weights ``1 - k/(N+1)`` on the amplitudes.
    """
    k = np.arange(degree + 1)
    g = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / math.sqrt(2.0)
    if profile == "flat":
        w = np.ones(degree + 1)
    elif profile == "harmonic":
        w = 1.0 / np.sqrt(k + 1.0)
    elif profile == "fejer":
        w = 1.0 - k / (degree + 1.0)
    else:
        raise InvalidSpec(f"unknown coefficient profile {profile!r}")
    c = g * w
    if degree > 0 and c[-1] == 0:
        c[-1] = 1e-300
    return Polynomial(c)
