import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_contraction, random_vector
from gfscalc.errors import InvalidSpec, SpectrumOutsideDisk
from gfscalc.gamma import (
    GaussianSample, fourier_resolvent_check, gamma_bound_of_family, gamma_dual_norm,
    gamma_gfs_estimate, gamma_holder_check, gaussian_norm, lattice_square_norm, power_family,
    shift_witness,
)
from gfscalc.linalg import AmbientSpace, pnorm
from gfscalc.zoo import cyclic_shift, diagonal, jordan, multiplier, truncated_shift

P43 = 4 / 3


def test_gaussian_second_moment():
    g = GaussianSample(7, 10_000, 3).draws
    m2 = np.mean(np.abs(g) ** 2, axis=0)
    assert np.all((0.95 <= m2) & (m2 <= 1.05))
    assert np.array_equal(g, GaussianSample(7, 10_000, 3).draws)
    assert not np.array_equal(g, GaussianSample(7, 10_000, 3, stream=1).draws)


def test_gaussian_norm_examples(rng):
    est = gaussian_norm(np.eye(2), AmbientSpace.hilbert(2))
    assert est.exact and est.value == math.sqrt(2)
    x = random_vector(rng, 5)
    est = gaussian_norm([x], AmbientSpace.hilbert(5))
    assert est.value == pytest.approx(np.linalg.norm(x), rel=1e-15)
    for p in (P43, 4.0):
        est = gaussian_norm([x], AmbientSpace.lp(5, p), K=10_000, seed=3)
        assert abs(est.value - pnorm(x, p)) <= 3 * est.std_error
    assert gaussian_norm(np.zeros((3, 4)), AmbientSpace.lp(4, 3.0), K=100).value == 0.0
    with pytest.raises(InvalidSpec):
        gaussian_norm(np.zeros((0, 3)), AmbientSpace.hilbert(3))


def test_hilbert_monte_carlo_agrees(rng):
    X = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    space = AmbientSpace.hilbert(6)
    exact = gaussian_norm(X, space).value
    mc = gaussian_norm(X, space, K=10_000, seed=5, force_mc=True)
    assert abs(mc.value - exact) <= 3 * mc.std_error


def test_dual_norm_examples(rng):
    assert gamma_dual_norm(np.eye(2), AmbientSpace.hilbert(2)).value == pytest.approx(math.sqrt(2))
    xs = random_vector(rng, 4)
    space = AmbientSpace.lp(4, 3.0)
    est = gamma_dual_norm([xs], space, K=4000, seed=2)
    assert not est.exact
    assert est.value == pytest.approx(pnorm(xs, space.q), rel=0.05)
    assert gamma_dual_norm(np.zeros((2, 4)), space).value == 0.0


def test_holder_examples(rng):
    X = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    res = gamma_holder_check(X, np.conj(X), AmbientSpace.hilbert(4))
    assert res["exact"] and res["lhs"] == pytest.approx(res["rhs"], rel=1e-12)
    res = gamma_holder_check(np.eye(2)[:1], np.eye(2)[1:], AmbientSpace.lp(2, 3.0), K=500)
    assert res["lhs"] == 0.0 and res["holds"]


@settings(max_examples=8)
@given(st.sampled_from([P43, 2.0, 4.0]), st.integers(2, 16), st.integers(1, 3), st.integers(0, 10_000))
def test_holder_random(p, d, n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    Xs = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    space = AmbientSpace.hilbert(d) if p == 2.0 else AmbientSpace.lp(d, p)
    assert gamma_holder_check(X, Xs, space, K=2000, seed=seed, dual_K=1000, restarts=2)["holds"]


def test_family_examples():
    est = gamma_bound_of_family([np.eye(3)], AmbientSpace.lp(3, P43), K=1000)
    assert est.value == pytest.approx(1.0, rel=1e-12)
    mults = [multiplier(np.exp(1j * np.arange(4) * k) * 0.9 ** k) for k in range(6)]
    est = gamma_bound_of_family(mults, AmbientSpace.lp(4, P43), K=2000, seed=1)
    rel = est.witnesses[0].get("rel_error", 0.0)
    assert est.value <= 1.0 + 3 * rel + 1e-12


def test_truncated_shift_growth():
    space = AmbientSpace.lp(16, P43)
    est = gamma_bound_of_family(power_family(truncated_shift(16), 16), space, K=2000, seed=0)
    assert est.value >= 16 ** (0.75 - 0.5) * (1 - 0.1)
    assert est.value >= 16 ** (0.75 - 0.5 - 0.1)


def test_diagonal_family_stable_under_doubling():
    T = diagonal([0.9, -0.5, 0.3j])
    family = power_family(T, 64)
    space = AmbientSpace.lp(3, P43)
    a = gamma_bound_of_family(family, space, K=1000, seed=2).value
    b = gamma_bound_of_family(family, space, K=2000, seed=2, selections=16, tuples=8).value
    assert abs(b / a - 1) <= 0.1


def test_lattice_examples():
    for n in (4, 16, 64):
        for p in (P43, 2.0, 4.0):
            w = shift_witness(n, p)
            assert w["numerator"] == pytest.approx(n ** (1 / p), rel=1e-15)
            assert w["ratio"] == pytest.approx(n ** (1 / p - 0.5), rel=1e-15)
    f = np.array([[3.0, 4.0]])
    assert lattice_square_norm(f, 2.0) == pytest.approx(5.0)
    samples = np.tile(np.array([1.0, 2.0]), (1, 32, 1))
    assert lattice_square_norm(samples, 1.0) == pytest.approx(3.0)
    assert lattice_square_norm(samples, 1.0, "lebesgue") == pytest.approx(3.0 * math.sqrt(2 * np.pi))
    assert lattice_square_norm(np.zeros((3, 5)), 3.0) == 0.0


def test_khintchine_maurey_window(rng):
    for p in (P43, 4.0):
        X = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
        g = gaussian_norm(X, AmbientSpace.lp(6, p), K=4000, seed=9).value
        s = lattice_square_norm(X, p)
        if not 0.1 <= g / s <= 10:
            warnings.warn(f"Gaussian/square-function ratio {g / s:.3g} outside [0.1, 10] for p={p}")
        assert np.isfinite(g / s)


def test_gamma_gfs_examples():
    est = gamma_gfs_estimate(np.zeros((1, 1)), 1, K=500)
    assert est.value <= 2 * np.pi + 1e-9
    est = gamma_gfs_estimate(jordan(1.0, 2), 1, K=500)
    assert "diverging" in est.flags
    with pytest.raises(SpectrumOutsideDisk):
        gamma_gfs_estimate(diagonal([1.5]), 1)


def test_gamma_gfs_diagonal_stable():
    T = diagonal([0.9, 0.4])
    space = AmbientSpace.lp(2, P43)
    a = gamma_gfs_estimate(T, 1, space, K=1000, seed=1)
    b = gamma_gfs_estimate(T, 1, space, K=2000, seed=1, n_pairs=8)
    assert a.meta["growth"]["status"] == "bounded"
    assert abs(b.value / a.value - 1) <= 0.1


def test_gamma_gfs_shift_bounded():
    est = gamma_gfs_estimate(cyclic_shift(4), 1, K=500)
    assert est.meta["growth"]["status"] == "bounded" and est.value <= 2 * np.pi * 1.01


def test_fourier_resolvent_examples():
    x = np.array([1.0, -1j])
    res = fourier_resolvent_check(np.zeros((2, 2)), 2.0, x)
    assert res["holds"] and res["max_error"] < 1e-15
    res = fourier_resolvent_check(diagonal([0.6, -0.2]), 1.5, x)
    assert res["holds"]
    assert res["weight_error"] <= 1e-12


@settings(max_examples=10)
@given(st.integers(1, 12), st.floats(1.05, 3.0), st.integers(0, 10_000))
def test_fourier_resolvent_random(d, r, seed):
    rng = np.random.default_rng(seed)
    res = fourier_resolvent_check(random_contraction(rng, d), r, random_vector(rng, d), K=20)
    assert res["holds"]
