import json

import numpy as np
import pytest

from gfscalc.config import RunConfig
from gfscalc.errors import InvalidSpec
from gfscalc.io import (
    dumps, load_matrix, matrix_from_dict, matrix_to_dict, vector_from_dict, vector_to_dict,
)


def test_matrix_round_trip():
    T = np.array([[1, 2j], [-0.5, 0.25 - 1j]])
    A, space = matrix_from_dict(matrix_to_dict(T))
    assert np.array_equal(A, T) and space.is_hilbert
    assert matrix_to_dict(T)["entries"][1] == [0.0, 2.0]


def test_matrix_from_spec_and_ambient():
    A, space = matrix_from_dict({"kind": "cyclic_shift", "d": 3, "ambient": "lp:4"})
    assert A.shape == (3, 3) and space.p == 4.0
    _, space = matrix_from_dict({"dim": 1, "entries": [[1, 0]], "ambient": "lp:1.5"})
    assert space.p == 1.5


@pytest.mark.parametrize("bad", [
    {"dim": 2, "entries": [[1, 0]]},
    {"dim": 1, "entries": [["x", 0]]},
    {"entries": [[1, 0]]},
    [1, 2, 3],
])
def test_matrix_rejects_malformed(bad):
    with pytest.raises(InvalidSpec):
        matrix_from_dict(bad)


def test_corrupted_file(tmp_path):
    path = tmp_path / "T.json"
    path.write_text('{"dim": 2, "entries": [[0.5')
    with pytest.raises(InvalidSpec):
        load_matrix(path)


def test_vector_round_trip():
    x = np.array([1 - 1j, 3.0])
    assert np.array_equal(vector_from_dict(vector_to_dict(x)), x)


def test_dumps_strict_and_sorted():
    text = dumps({"b": np.float64(np.inf), "a": 1 + 2j, "c": np.arange(2)})
    assert json.loads(text) == {"a": [1.0, 2.0], "b": None, "c": [0, 1]}
    assert text.index('"a"') < text.index('"b"')


def test_config_defaults_and_profiles(tmp_path):
    cfg = RunConfig()
    assert cfg.circle_tol == 1e-10 and cfg.circle_nmax == 2 ** 20 and cfg.r_min == 1e-3
    quick = RunConfig.quick()
    assert quick.profile == "quick" and quick.gfs_samples < cfg.gfs_samples
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"profile": "quick", "seed": 3}))
    loaded = RunConfig.load(path)
    assert loaded.seed == 3 and loaded.gfs_samples == quick.gfs_samples
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


def test_config_validation():
    with pytest.raises(InvalidSpec):
        RunConfig.from_dict({"colour": "blue"})
    with pytest.raises(InvalidSpec):
        RunConfig(r_min=20.0)
    with pytest.raises(InvalidSpec):
        RunConfig(profile="slow")
