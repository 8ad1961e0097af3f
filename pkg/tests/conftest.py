import numpy as np
import pytest
from hypothesis import settings

from cakecut import valuation as V

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def uni():
    return V.uniform()


@pytest.fixture
def heavy_left():
    """Density 3/2 on [0, 1/2] and 1/2 after; midpoint 1/3."""
    return V.piecewise([0.0, 0.5, 1.0], [1.5, 0.5])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = {}


@pytest.fixture
def record():
    """Register one pass/fail line for an acceptance criterion."""

    def _record(number, passed, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
