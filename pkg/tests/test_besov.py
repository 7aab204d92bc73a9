import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_contraction
from gfscalc.besov import (
    besov_norm, besov_norm_batch, besov_of_derivative_bound_check, log_degree_bound_check,
    peller_bound_check, peller_type_constant, submultiplicativity_constant,
)
from gfscalc.errors import RadiusExceeded, SpectrumOutsideDisk
from gfscalc.funcs import Polynomial, PowerSeriesFunction, random_polynomial, sup_norm_on_circle
from gfscalc.gfs import gfs_constant
from gfscalc.zoo import cyclic_shift, diagonal, jordan


@pytest.mark.parametrize("N", [1, 2, 7, 40])
def test_monomial_norm(N):
    res = besov_norm(Polynomial.monomial(N))
    assert res.derivative_part == pytest.approx(1.0, abs=1e-12)
    assert res.sup_part == pytest.approx(1.0, abs=1e-12)
    assert res.total == pytest.approx(2.0, abs=1e-9)


def test_constant_and_linear():
    for c in (0.0, 2.0, -1.5, 3 + 4j):
        assert besov_norm(Polynomial([c])).total == abs(c)
    res = besov_norm(Polynomial([1.0, 0.5j]))
    assert res.derivative_part == pytest.approx(0.5, abs=1e-14)
    assert res.sup_part == pytest.approx(1.5, abs=1e-12)


def test_series_norm():
    f = PowerSeriesFunction.geometric(0.5)
    res = besov_norm(f)
    # f' = a/(1 - a z)^2, sup on the circle of radius u is a/(1 - a u)^2
    assert res.derivative_part == pytest.approx(1.0, rel=1e-9)  # int_0^1 a/(1-au)^2 du = 1
    assert abs(res.sup_part - 2.0) <= res.grid_meta["sup_correction"] + 1e-9
    with pytest.raises(RadiusExceeded):
        besov_norm(PowerSeriesFunction.geometric(1.0))


def test_batch_matches_single(rng):
    C = np.array([random_polynomial(rng, 10, "fejer").coeffs for _ in range(4)])
    deriv, sup = besov_norm_batch(C)
    for row, dv, sv in zip(C, deriv, sup):
        ref = besov_norm(Polynomial(row))
        assert dv == pytest.approx(ref.derivative_part, rel=1e-5)
        assert sv == pytest.approx(ref.sup_part, rel=1e-9)


@settings(max_examples=10)
@given(st.integers(0, 12), st.integers(0, 10_000))
def test_norm_axioms(degree, seed):
    rng = np.random.default_rng(seed)
    f, g = random_polynomial(rng, degree, "flat"), random_polynomial(rng, degree, "harmonic")
    nf, ng = besov_norm(f).total, besov_norm(g).total
    assert besov_norm(f + g).total <= (nf + ng) * (1 + 1e-9)
    lam = complex(rng.standard_normal(), rng.standard_normal())
    assert besov_norm(lam * f).total == pytest.approx(abs(lam) * nf, rel=1e-9)


def test_submultiplicativity_measured():
    res = submultiplicativity_constant(samples=6, degree=6)
    assert 0 < res["K"] < 10


def test_derivative_bound_examples(rng):
    res = besov_of_derivative_bound_check(Polynomial.monomial(2), 2.0)
    assert res["lhs"] == pytest.approx(2.0, abs=1e-10) and res["rhs"] == pytest.approx(4.0)
    assert res["holds"]
    res = besov_of_derivative_bound_check(Polynomial([3.0]), 1.5)
    assert res["lhs"] == 0.0 and res["holds"]
    assert besov_of_derivative_bound_check(random_polynomial(rng, 10, "flat"), 1.5)["holds"]
    with pytest.raises(ValueError):
        besov_of_derivative_bound_check(Polynomial([1.0]), 1.0)


def test_log_ratio_closed_forms():
    assert besov_norm(Polynomial([2.0])).total / (math.log(2) * 2.0) == pytest.approx(1 / math.log(2))
    ratios = [besov_norm(Polynomial.monomial(N)).total / math.log(N + 2) for N in (2, 8, 32)]
    assert ratios == pytest.approx([2 / math.log(N + 2) for N in (2, 8, 32)], rel=1e-9)
    assert ratios[0] > ratios[1] > ratios[2]


def test_log_degree_table():
    res = log_degree_bound_check([2, 8, 32], samples=24, seed=3)
    assert res["holds"] and len(res["table"]) == 3
    assert res["table"][1]["monomial_ratio"] == pytest.approx(2 / math.log(10))


def test_peller_constant_examples():
    est = peller_type_constant(np.zeros((1, 1)), degree_max=10, samples=32)
    assert est.value <= 1.0 + 1e-12
    est = peller_type_constant(diagonal([0.5]), degree_max=10, samples=32)
    assert est.value >= 0.25
    est = peller_type_constant(jordan(1.0, 2), degree_max=40, samples=16)
    assert "growing" in est.flags
    with pytest.raises(SpectrumOutsideDisk):
        peller_type_constant(diagonal([1.2]))


def test_peller_bound_on_gfs_operators(rng):
    for T in (diagonal([0.9, -0.3]), cyclic_shift(4), random_contraction(rng, 4, 0.9)):
        C = gfs_constant(T, 1, samples=16).value
        assert peller_bound_check(T, C, degree_max=30, samples=32)["holds"]


def test_sup_part_is_boundary_sup(rng):
    P = random_polynomial(rng, 9, "flat")
    assert besov_norm(P).sup_part == pytest.approx(sup_norm_on_circle(P, 1.0), rel=1e-14)
