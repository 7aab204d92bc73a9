import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


def random_contraction(rng, d, scale=1.0):
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * A / np.linalg.norm(A, 2)


def random_vector(rng, d):
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Print and record a one-line PASS/FAIL verdict, then assert it."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        print(line)
        lines.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
