"""Convolution functional calculus behind the Peller algebra ``A(D)``.

For ``f`` on the circle and a polynomial ``h`` the convolution ``f * h`` is
the polynomial with coefficients ``c_n(f) c_n(h)``.  When ``h = u v``::

    <(f * (uv))(T) x, x*> = 1/(2pi) int f(e^{is}) <u(e^{-is} T) x, v(e^{-is} T)^T x*> ds

with the transpose as Banach adjoint of the bilinear pairing.
"""

from __future__ import annotations

import math

import numpy as np

from .calculus import apply_polynomial
from .errors import DecompositionMismatch, InvalidSpec
from .funcs import Polynomial
from .linalg import as_matrix


def circle_coefficients(samples) -> np.ndarray:
    """Discrete Fourier coefficients ``c_n``, ``n = 0..N-1`` (negative
    frequencies wrap to the top half)."""
    f = np.asarray(samples, dtype=complex)
    return np.fft.fft(f) / f.size


def convolution_polynomial(f_samples, h: Polynomial) -> Polynomial:
    """``f * h``: coefficients ``c_n(f) c_n(h)`` for ``0 <= n <= deg h``."""
    c = circle_coefficients(f_samples)
    N = c.size
    if h.coeffs.size > N // 2:
        raise InvalidSpec("circle samples do not resolve the degree of h")
    return Polynomial(c[: h.coeffs.size] * h.coeffs)


def _twisted_apply(coeffs, A, y, s):
    """``sum_k c_k e^{-iks} A^k y`` for every angle ``s``."""
    V = [y]
    for _ in range(coeffs.size - 1):
        V.append(A @ V[-1])
    V = np.array(V)
    k = np.arange(coeffs.size)
    W = coeffs[None, :] * np.exp(-1j * np.outer(s, k))
    return W @ V


def peller_convolution_check(f_samples, u: Polynomial, v: Polynomial, T, x, xstar,
                             tol: float = 1e-9) -> dict:
    """Both sides of the convolution identity.

    ``f_samples`` are values of ``f`` at ``s_j = 2 pi j / N``; the trapezoid
    rule on these nodes is exact when ``f`` is band-limited below
    ``N - deg(uv)``.
    """
    A = as_matrix(T)
    x = np.asarray(x, dtype=complex)
    xs = np.asarray(xstar, dtype=complex)
    f = np.asarray(f_samples, dtype=complex)
    N = f.size
    s = 2 * np.pi * np.arange(N) / N
    conv = convolution_polynomial(f, u * v)
    lhs = complex(xs @ apply_polynomial(conv, A) @ x)
    Y = _twisted_apply(u.coeffs, A, x, s)
    Z = _twisted_apply(v.coeffs, A.T, xs, s)
    rhs = complex(np.mean(f * np.sum(Y * Z, axis=1)))
    scale = max(1.0, abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs), "holds": abs(lhs - rhs) <= tol * scale}


def h1_norm(h: Polynomial, nodes: int | None = None) -> float:
    """``(1/2pi) int |h(e^{it})| dt`` by the trapezoid rule.

    ``|h|`` has kinks at zeros of ``h`` on the circle, where the rule only
    converges like ``N^-2``; the default ``N = 2^16`` keeps that below 1e-9.
    """
    N = nodes or max(1 << 16, 64 * (h.degree + 1))
    t = 2 * np.pi * np.arange(N) / N
    return float(np.mean(np.abs(h(np.exp(1j * t)))))


def default_decomposition(P: Polynomial) -> list:
    """One pair: ``f`` with ``c_n(f) = 1`` on the support of ``P`` and
    ``h = P``."""
    support = np.nonzero(P.coeffs)[0]
    N = 1 << max(6, math.ceil(math.log2(4 * (P.coeffs.size + 1))))
    s = 2 * np.pi * np.arange(N) / N
    f = np.exp(1j * np.outer(s, support)).sum(axis=1) if support.size else np.zeros(N, dtype=complex)
    return [(f, P)]


def peller_a_norm_upper(P: Polynomial, decomposition=None, tol: float = 1e-10) -> float:
    """Upper bound ``sum ||f_k||_inf ||h_k||_1`` for the ``A(D)`` norm of ``P``.

    ``decomposition`` is a list of ``(f_samples, h)``; the sum of the
    convolutions must reproduce ``P`` or :class:`DecompositionMismatch` is
    raised.  ``||f||_inf`` is the largest sample modulus.
    """
    if decomposition is None:
        decomposition = default_decomposition(P)
    if P.is_zero() and not decomposition:
        return 0.0
    n = max([P.coeffs.size] + [h.coeffs.size for _, h in decomposition])
    total = np.zeros(n, dtype=complex)
    bound = 0.0
    for f, h in decomposition:
        conv = convolution_polynomial(f, h).coeffs
        total[: conv.size] += conv
        bound += float(np.max(np.abs(f))) * h1_norm(h)
    target = np.zeros(n, dtype=complex)
    target[: P.coeffs.size] = P.coeffs
    scale = max(1.0, float(np.max(np.abs(target))))
    if np.max(np.abs(total - target)) > tol * scale:
        raise DecompositionMismatch("decomposition does not reproduce the polynomial")
    return bound
