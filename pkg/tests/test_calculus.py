import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_contraction, random_vector
from gfscalc.calculus import (
    apply_function, apply_polynomial, besov_apply, besov_representation, default_rho,
    derivative_calculus_ipp, derivative_calculus_rd, horner_calculus,
)
from gfscalc.errors import InvalidSpec, RadiusExceeded
from gfscalc.funcs import Polynomial, PowerSeriesFunction, random_polynomial
from gfscalc.zoo import diagonal, jordan


def test_apply_polynomial_examples():
    assert np.allclose(apply_polynomial(Polynomial([0, 0, 1]), jordan(0.5, 2)), [[0.25, 1], [0, 0.25]])
    assert np.allclose(apply_polynomial(Polynomial([1]), jordan(0.5, 3)), np.eye(3))
    a = np.array([0.3, -0.5, 0.9j])
    assert np.allclose(apply_polynomial(Polynomial([0, -1, 0, 1]), diagonal(a)), np.diag(a ** 3 - a))


def test_rd_examples():
    T = jordan(0.5, 2)
    for n in (0, 2, 5):
        phi = Polynomial.monomial(n + 1, 1.0 / (n + 1))
        got = derivative_calculus_rd(phi, 1, T).value
        assert np.allclose(got, np.linalg.matrix_power(T, n), atol=1e-12)
    assert np.allclose(derivative_calculus_rd(Polynomial([2.0]), 1, T).value, 0, atol=1e-14)
    got = derivative_calculus_rd(Polynomial([0, 0, 1]), 0, T, rho=1.5).value
    assert np.allclose(got, [[0.25, 1], [0, 0.25]], atol=1e-10)


def test_ipp_examples(rng):
    T = random_contraction(rng, 3, 0.8)
    P = random_polynomial(rng, 6, "flat")
    assert np.allclose(derivative_calculus_ipp(P, 0, T).value,
                       derivative_calculus_rd(P, 0, T).value, atol=1e-12)
    got = derivative_calculus_ipp(Polynomial([0, 0, 0, 1]), 2, diagonal([0.5]), rho=1.3).value
    assert got[0, 0] == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_monomial_recovery(m, rng):
    T = random_contraction(rng, 4, 0.9)
    for n in range(0, 11):
        c = np.zeros(n + m + 1)
        c[-1] = 1.0 / math.prod(range(n + 1, n + m + 1))
        got = derivative_calculus_ipp(Polynomial(c), m, T).value
        ref = np.linalg.matrix_power(T, n)
        assert np.linalg.norm(got - ref) <= 1e-8 * max(1.0, np.linalg.norm(ref))


def test_series_exponential():
    c = [1 / math.factorial(k) for k in range(40)]
    exp = PowerSeriesFunction(c, math.inf, majorant=None)
    T = jordan(0.3, 2)
    got = derivative_calculus_ipp(exp, 1, T).value
    ref = math.exp(0.3) * np.array([[1, 1], [0, 1]])
    assert np.allclose(got, ref, atol=1e-10)


def test_contour_radius_checks():
    geo = PowerSeriesFunction.geometric(0.5)
    with pytest.raises(RadiusExceeded):
        derivative_calculus_rd(geo, 1, jordan(0.5, 2), rho=2.5)
    with pytest.raises(InvalidSpec):
        derivative_calculus_rd(Polynomial([0, 1]), 1, diagonal([0.9]), rho=0.5)
    assert default_rho(geo, diagonal([0.5])) == pytest.approx(1.25)


@given(st.integers(1, 12), st.integers(0, 20), st.integers(0, 3), st.integers(0, 10_000))
def test_ipp_identity_and_horner(d, degree, m, seed):
    rng = np.random.default_rng(seed)
    T = random_contraction(rng, d, rng.uniform(0.2, 1.0))
    P = random_polynomial(rng, degree, "flat")
    sigma = max(abs(np.linalg.eigvals(T)))
    rho = rng.uniform(sigma + 0.1, 2.0)
    rd = derivative_calculus_rd(P, m, T, rho).value
    ipp = derivative_calculus_ipp(P, m, T, rho).value
    ref = horner_calculus(P, m, T).value
    scale = max(np.linalg.norm(ref), 1.0)
    assert np.linalg.norm(rd - ipp) <= 1e-9 * scale
    assert np.linalg.norm(rd - ref) <= 1e-8 * scale
    assert np.linalg.norm(ipp - ref) <= 1e-8 * scale


@given(st.integers(1, 6), st.integers(0, 3), st.integers(0, 10_000))
def test_rho_independence(d, m, seed):
    rng = np.random.default_rng(seed)
    T = random_contraction(rng, d, 0.7)
    P = random_polynomial(rng, 10, "harmonic")
    a = derivative_calculus_ipp(P, m, T, 0.9).value
    b = derivative_calculus_ipp(P, m, T, 1.8).value
    assert np.linalg.norm(a - b) <= 1e-9 * max(np.linalg.norm(a), 1.0)


def test_besov_constant_term(rng):
    T = random_contraction(rng, 3, 0.9)
    x, xs = random_vector(rng, 3), random_vector(rng, 3)
    got = besov_apply(Polynomial([2.5]), T, x, xs)
    assert got == pytest.approx(2.5 * (xs @ x), rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_besov_monomial_diagonal(n):
    got = besov_apply(Polynomial.monomial(n), diagonal([0.5]), np.ones(1), np.ones(1))
    assert got == pytest.approx(0.5 ** n, abs=1e-7)


def test_besov_identity_function(rng):
    A = random_contraction(rng, 4)
    T = 0.9 * A / max(abs(np.linalg.eigvals(A)))
    x, xs = random_vector(rng, 4), random_vector(rng, 4)
    got = besov_apply(Polynomial([0, 1]), T, x, xs)
    ref = xs @ T @ x
    assert abs(got - ref) <= 1e-7 * abs(ref)


def test_besov_matrix_form_matches_horner(rng):
    T = random_contraction(rng, 3, 0.9)
    P = random_polynomial(rng, 7, "flat")
    res = besov_representation(P, T)
    ref = apply_polynomial(P, T)
    assert np.linalg.norm(res.value - ref) <= 1e-7 * np.linalg.norm(ref)
    assert res.meta["r_min"] == 0.0 and res.flags == []


def test_besov_linearity(rng):
    T = random_contraction(rng, 3, 0.8)
    P, Q = random_polynomial(rng, 5, "flat"), random_polynomial(rng, 5, "flat")
    x, y, xs = random_vector(rng, 3), random_vector(rng, 3), random_vector(rng, 3)
    a, b = 0.7 - 0.2j, 1.3
    lin_f = besov_apply(a * P + b * Q, T, x, xs)
    assert abs(lin_f - (a * besov_apply(P, T, x, xs) + b * besov_apply(Q, T, x, xs))) <= 1e-9 * abs(lin_f)
    lin_x = besov_apply(P, T, a * x + b * y, xs)
    assert abs(lin_x - (a * besov_apply(P, T, x, xs) + b * besov_apply(P, T, y, xs))) <= 1e-9 * abs(lin_x)


def test_besov_unit_spectrum_reports_floor():
    res = besov_representation(Polynomial([0, 1]), diagonal([1.0]), np.ones(1), np.ones(1))
    assert "radial_floor" in res.flags
    assert res.meta["dropped_estimate"] > 0
    assert abs(res.value - 1.0) <= 10 * res.meta["dropped_estimate"]


def test_apply_function_dispatch(rng):
    T = random_contraction(rng, 3, 0.5)
    P = random_polynomial(rng, 4, "flat")
    ref = horner_calculus(P, 1, T).value
    for method in ("horner", "rd", "ipp", "besov"):
        got = apply_function(P, T, 1, method).value
        assert np.allclose(got, ref, atol=1e-7)
    with pytest.raises(InvalidSpec):
        apply_function(P, T, 1, "taylor")
