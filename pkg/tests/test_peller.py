import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_contraction, random_vector
from gfscalc.errors import DecompositionMismatch, InvalidSpec
from gfscalc.funcs import Polynomial, random_polynomial
from gfscalc.peller import (
    convolution_polynomial, default_decomposition, h1_norm, peller_a_norm_upper,
    peller_convolution_check,
)

N = 64
S = 2 * np.pi * np.arange(N) / N


def band_limited(rng, band=8):
    c = np.zeros(N, dtype=complex)
    c[: band + 1] = rng.standard_normal(band + 1) + 1j * rng.standard_normal(band + 1)
    c[-band:] = rng.standard_normal(band) + 1j * rng.standard_normal(band)
    return np.fft.ifft(c) * N


def test_convolution_identity_trivial_cases(rng):
    T = random_contraction(rng, 3)
    x, xs = random_vector(rng, 3), random_vector(rng, 3)
    res = peller_convolution_check(np.exp(1j * S), Polynomial([0, 1]), Polynomial([1]), T, x, xs)
    assert res["lhs"] == pytest.approx(xs @ T @ x, rel=1e-13) and res["holds"]
    P = random_polynomial(rng, 4, "flat")
    res = peller_convolution_check(np.ones(N), P, Polynomial([1]), T, x, xs)
    assert res["lhs"] == pytest.approx(P.coeffs[0] * (xs @ x), rel=1e-13) and res["holds"]


@settings(max_examples=15)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(1, 8), st.integers(0, 10_000))
def test_convolution_identity_random(du, dv, d, seed):
    rng = np.random.default_rng(seed)
    u, v = random_polynomial(rng, du, "flat"), random_polynomial(rng, dv, "flat")
    T = random_contraction(rng, d)
    res = peller_convolution_check(band_limited(rng), u, v, T, random_vector(rng, d),
                                   random_vector(rng, d))
    assert res["holds"]


def test_convolution_polynomial_coefficients(rng):
    f = band_limited(rng)
    h = random_polynomial(rng, 5, "flat")
    c = np.fft.fft(f) / N
    assert np.allclose(convolution_polynomial(f, h).coeffs, c[:6] * h.coeffs)
    with pytest.raises(InvalidSpec):
        convolution_polynomial(np.ones(8), Polynomial.monomial(6))


def test_a_norm_examples():
    P = Polynomial([0, 1])
    assert peller_a_norm_upper(P, [(np.exp(1j * S), P)]) == pytest.approx(1.0, rel=1e-12)
    assert peller_a_norm_upper(Polynomial([0.0])) == 0.0
    for n in (3, 10):
        Pn = Polynomial.monomial(n)
        f, h = default_decomposition(Pn)[0]
        expected = np.max(np.abs(f)) * h1_norm(h)
        assert peller_a_norm_upper(Pn) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(1.0, rel=1e-12)


def test_a_norm_mismatch():
    with pytest.raises(DecompositionMismatch):
        peller_a_norm_upper(Polynomial([0, 1]), [(np.ones(N), Polynomial([0, 1]))])


def test_h1_norm():
    assert h1_norm(Polynomial([1, 1])) == pytest.approx(4 / np.pi, rel=1e-9)
    assert h1_norm(Polynomial.monomial(7, 2.5)) == pytest.approx(2.5, rel=1e-14)
