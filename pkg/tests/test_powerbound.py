import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_contraction, random_vector
from gfscalc.errors import InvalidSpec
from gfscalc.gfs import default_r_grid
from gfscalc.linalg import AmbientSpace
from gfscalc.powerbound import (
    hilbert_quadratic_constant, plancherel_check, power_bound, power_envelope, resolvent_gram,
)
from gfscalc.zoo import cyclic_shift, diagonal, jordan, truncated_shift

TWO_PI = 2 * np.pi


def test_power_bound_examples():
    rep = power_bound(cyclic_shift(5))
    assert rep.M_measured == pytest.approx(1.0) and rep.certified and rep.M_upper == pytest.approx(1.0)
    rep = power_bound(diagonal([0.9]))
    assert rep.M_upper == pytest.approx(1.0) and rep.certified
    rep = power_bound(jordan(1.0, 2), 512)
    # J^n = [[1, n], [0, 1]]
    n = 512
    assert rep.M_measured == pytest.approx(np.linalg.norm([[1, n], [0, 1]], 2), rel=1e-12)
    assert rep.divergent and not rep.certified and "divergent" in rep.flags


def test_power_bound_certification_exact():
    rep = power_bound(jordan(0.5, 2))
    assert rep.certified
    exact = max(np.linalg.norm(np.linalg.matrix_power(jordan(0.5, 2), n), 2) for n in range(60))
    assert rep.M_upper == pytest.approx(exact, rel=1e-12)


def test_power_bound_milestones_agree():
    T = jordan(0.99, 3)
    rep = power_bound(T, 64, keep_profile=True)
    for k, v in rep.milestones:
        assert v == pytest.approx(rep.profile[k], rel=1e-9)


def test_power_bound_lp_and_nilpotent():
    rep = power_bound(truncated_shift(6), space=AmbientSpace.lp(6, 4 / 3))
    assert rep.certified and rep.M_upper == pytest.approx(1.0)
    with pytest.raises(InvalidSpec):
        power_bound(np.eye(2), 0)


def test_power_envelope():
    assert power_envelope(diagonal([0.5]), 2.0) == (1.0, 0.5)
    C, q = power_envelope(jordan(0.9, 2), 1.0)
    n = np.arange(200)
    norms = [np.linalg.norm(np.linalg.matrix_power(jordan(0.9, 2), k), 2) for k in n]
    assert q < 1.0 and np.all(np.array(norms) <= C * q ** n * (1 + 1e-9))


def test_plancherel_examples():
    res = plancherel_check(diagonal([0.5]), 2.0, np.ones(1))
    assert res["lhs"] == pytest.approx(8 * np.pi / 15, rel=1e-12)
    assert res["rhs"] == pytest.approx(8 * np.pi / 15, rel=1e-12)
    x = np.array([1.0, 2j, -1.0])
    res = plancherel_check(np.zeros((3, 3)), 2.0, x)
    assert res["lhs"] == pytest.approx(TWO_PI * 6 / 4, rel=1e-12)
    res = plancherel_check(cyclic_shift(5), 2.0, np.eye(5)[0])
    assert res["lhs"] == pytest.approx(TWO_PI / 3, rel=1e-12)
    assert res["rhs"] == pytest.approx(TWO_PI / 3, rel=1e-12)


@given(st.integers(1, 16), st.sampled_from([1.5, 2.0, 4.0]), st.integers(0, 10_000))
def test_plancherel_random(d, r, seed):
    rng = np.random.default_rng(seed)
    T = random_contraction(rng, d)
    res = plancherel_check(T, r, random_vector(rng, d))
    assert res["gap"] <= 1e-9 * (1 + res["lhs"])


def test_gram_matches_sampled_vectors(rng):
    T = random_contraction(rng, 3)
    G = resolvent_gram(T, 1.5)
    x = random_vector(rng, 3)
    assert np.real(x.conj() @ G @ x) == pytest.approx(plancherel_check(T, 1.5, x)["lhs"], rel=1e-10)


def test_quadratic_constants_examples():
    grid = default_r_grid(points=10)
    q = hilbert_quadratic_constant(diagonal([0.9]), grid)
    assert q["C_forward"].value <= TWO_PI * (1 + 1e-6)
    q = hilbert_quadratic_constant(np.zeros((1, 1)), grid)
    assert q["C_forward"].value == pytest.approx(TWO_PI * 0.99, rel=1e-9)
    for row in q["profile"]:
        assert row["sampled_forward"] <= row["forward"] * (1 + 1e-12)
    a = hilbert_quadratic_constant(jordan(1.0, 2), default_r_grid(0.1, points=4))["C_forward"].value
    b = hilbert_quadratic_constant(jordan(1.0, 2), default_r_grid(0.01, points=4))["C_forward"].value
    assert b > 2 * a


def test_quadratic_forward_bound_certified(rng):
    grid = default_r_grid(points=10)
    for T in (cyclic_shift(4), jordan(0.5, 2), random_contraction(rng, 4)):
        rep = power_bound(T)
        assert rep.certified
        q = hilbert_quadratic_constant(T, grid)
        assert q["C_forward"].value <= TWO_PI * rep.M_upper ** 2 * (1 + 1e-6)
