import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def alphas(draw, max_len=16, radius=0.9, min_len=0):
    """Complex coefficient sequences inside the disk of the given radius."""
    n = draw(st.integers(min_len, max_len))
    r = draw(st.lists(st.floats(0, radius), min_size=n, max_size=n))
    t = draw(st.lists(st.floats(0, 2 * np.pi), min_size=n, max_size=n))
    return np.array(r) * np.exp(1j * np.array(t))


def random_disk(rng, n, radius=0.9):
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
