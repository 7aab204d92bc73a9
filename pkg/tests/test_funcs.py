import numpy as np
import pytest
from hypothesis import given, strategies as st

from gfscalc.errors import InvalidSpec, RadiusExceeded
from gfscalc.funcs import (
    Polynomial, PowerSeriesFunction, batch_circle_sup, cauchy_bound, circle_sup, derivative,
    falling_factorial, function_from_dict, horner, random_polynomial, sup_norm_on_circle,
)


def test_derivative_examples():
    assert np.allclose(derivative(Polynomial([0, 0, 1]), 1).coeffs, [0, 2])
    assert derivative(Polynomial([3.0]), 1).is_zero()
    d3 = derivative(Polynomial.monomial(5), 3)
    assert np.allclose(d3.coeffs, [0, 0, 60])
    assert falling_factorial(5, 3) == 60


def test_sup_norm_examples():
    for N in (1, 5, 17):
        assert sup_norm_on_circle(Polynomial.monomial(N), 0.7) == pytest.approx(0.7 ** N, rel=1e-13)
    assert sup_norm_on_circle(Polynomial([1, 1]), 1.0) == pytest.approx(2.0, rel=1e-13)
    geo = PowerSeriesFunction.geometric(0.5)
    assert sup_norm_on_circle(geo, 1.0) == pytest.approx(2.0, rel=1e-13)


def test_sup_refinement_off_grid():
    # peak halfway between grid nodes: |1 + e^{i(t - t0)}| with t0 = pi/4096
    t0 = np.pi / 4096
    P = Polynomial([1.0, np.exp(-1j * t0)])
    res = circle_sup(P, 1.0, grid=4096)
    assert res.value == pytest.approx(2.0, abs=1e-13)
    assert res.t_max == pytest.approx(t0, abs=1e-6)


def test_cauchy_bound_examples():
    for N in (1, 3, 6):
        assert cauchy_bound(Polynomial.monomial(N), 1, 2.0, 1.0) == pytest.approx(2.0 ** N)
    P = Polynomial([1, -2, 0.5])
    assert cauchy_bound(P, 0, 1.5, 1.0) == pytest.approx(sup_norm_on_circle(P, 1.5))
    assert cauchy_bound(Polynomial([4.0]), 2, 2.0, 1.0) >= 0.0


def test_series_radius_checks():
    geo = PowerSeriesFunction.geometric(0.5)
    assert geo.radius == pytest.approx(2.0)
    with pytest.raises(RadiusExceeded):
        geo(np.array([2.5]))
    with pytest.raises(RadiusExceeded):
        cauchy_bound(geo, 1, 3.0, 1.0)
    # certified geometric tail
    assert geo.tail_bound(1.0) == pytest.approx(0.5 ** 256 / 0.5)
    assert geo.certified and geo.derivative(1).certified


def test_series_derivative_majorant():
    geo = PowerSeriesFunction.geometric(0.5)
    d = geo.derivative(2)
    k = np.arange(d.length)
    assert np.all(np.abs(d.coeffs) <= d.majorant * d.radius ** (-k) * (1 + 1e-12))


def test_function_json_round_trip():
    P = Polynomial([1, 2j, -3])
    Q = function_from_dict(P.to_dict())
    assert np.array_equal(P.coeffs, Q.coeffs)
    S = function_from_dict(PowerSeriesFunction([1, 0.5], 2.0).to_dict())
    assert S.radius == 2.0
    with pytest.raises(InvalidSpec):
        function_from_dict({"kind": "spline", "coeffs": [[1, 0]]})
    with pytest.raises(InvalidSpec):
        function_from_dict({"kind": "series", "coeffs": [[1, 0]]})


def test_polynomial_arithmetic():
    P, Q = Polynomial([1, 1]), Polynomial([1, -1])
    assert np.allclose((P * Q).coeffs, [1, 0, -1])
    assert np.allclose((P + Q).coeffs, [2])
    assert (P - P).is_zero()
    assert np.allclose((2 * P).coeffs, [2, 2])


def test_batch_circle_sup_matches_single(rng):
    C = np.array([random_polynomial(rng, 12, "flat").coeffs for _ in range(5)])
    vals, _ = batch_circle_sup(C, 0.8)
    for row, v in zip(C, vals):
        assert v == pytest.approx(sup_norm_on_circle(Polynomial(row), 0.8), rel=1e-12)


@given(st.integers(0, 40), st.integers(0, 10_000), st.floats(1.05, 3.0), st.floats(0.05, 0.95),
       st.integers(0, 3))
def test_cauchy_inequality(degree, seed, r, frac, m):
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, degree, "flat")
    rho = 1.0 + frac * (r - 1.0)
    lhs = sup_norm_on_circle(P.derivative(m), rho)
    assert lhs <= cauchy_bound(P, m, r, rho) * (1 + 1e-8)


@given(st.integers(0, 60), st.integers(0, 10_000))
def test_horner_matches_coefficient_sum(degree, seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    z = 2.0 * rng.uniform() * np.exp(1j * rng.uniform(0, 6.3))
    direct = sum(ck * z ** k for k, ck in enumerate(c))
    scale = np.sum(np.abs(c) * abs(z) ** np.arange(degree + 1))
    assert abs(horner(c, z) - direct) <= 1e-13 * scale


def test_random_polynomial_profiles(rng):
    for prof in ("flat", "harmonic", "fejer"):
        assert random_polynomial(rng, 9, prof).degree == 9
    with pytest.raises(InvalidSpec):
        random_polynomial(rng, 3, "pink")
