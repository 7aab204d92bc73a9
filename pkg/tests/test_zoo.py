import numpy as np
import pytest

from gfscalc.errors import InvalidSpec
from gfscalc.linalg import spectral_radius
from gfscalc.zoo import (
    KINDS, OperatorSpec, build, cyclic_shift, default_zoo, diagonal, jordan, multiplier,
    random_contraction, ritt_constant, ritt_diagonal, ritt_eigenvalues, truncated_shift,
)


def test_cyclic_shift_is_permutation():
    U = cyclic_shift(3)
    assert np.array_equal(U, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    x = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(U @ x, [2.0, 3.0, 1.0])


def test_closed_forms():
    assert np.array_equal(diagonal([0.5, -0.5]), [[0.5, 0], [0, -0.5]])
    assert np.array_equal(jordan(0.5, 3), [[0.5, 1, 0], [0, 0.5, 1], [0, 0, 0.5]])
    assert np.array_equal(truncated_shift(3), [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert np.array_equal(multiplier([1, -1j]), np.diag([1, -1j]))


def test_validation():
    with pytest.raises(InvalidSpec):
        jordan(1.5, 2)
    assert jordan(1.5, 2, allow_outside=True)[0, 0] == 1.5
    with pytest.raises(InvalidSpec):
        multiplier([1.2])
    with pytest.raises(InvalidSpec):
        build({"kind": "hankel", "d": 3})
    with pytest.raises(InvalidSpec):
        build({"kind": "jordan", "d": 3})


def test_random_contraction_clipped():
    for seed in range(5):
        T = random_contraction(6, seed)
        assert np.linalg.norm(T, 2) <= 1 + 1e-12
        assert spectral_radius(T) <= 1 + 1e-12
    assert np.array_equal(random_contraction(4, 3), random_contraction(4, 3))


def test_ritt_eigenvalues_in_sector():
    mu = ritt_eigenvalues(8, 0.8)
    t = 1 - mu
    beta = np.angle(t)
    assert np.all(np.abs(beta) <= 0.8 + 1e-12)
    assert np.all((np.abs(t) > 0) & (np.abs(t) < 1)) and np.all(np.abs(mu) < 1)
    assert np.allclose(np.diag(ritt_diagonal(8, 0.8)), mu)


def test_ritt_constant_oracle():
    # single eigenvalue a in (0, 1): sup over the circle of |l - 1|/|l - a| is 2/(1 + a)
    a = 0.4
    assert ritt_constant([a]) == pytest.approx(2 / (1 + a), rel=1e-6)
    assert ritt_constant([0.0]) == pytest.approx(2.0, rel=1e-6)


def test_spec_round_trip_and_zoo():
    for name, spec in default_zoo().items():
        assert spec.kind in KINDS
        T, space = build(spec.to_dict())
        T2, _ = build(OperatorSpec.from_dict(spec.to_dict()))
        assert np.array_equal(T, T2)
        assert space.dim == T.shape[0]
    T, space = build(default_zoo()["truncated_shift_lp_8"])
    assert not space.is_hilbert and space.p == pytest.approx(4 / 3)
