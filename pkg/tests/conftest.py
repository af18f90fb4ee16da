import numpy as np
import pytest

from decaylab.numgrid import Field


def random_dirichlet_field(grid, rng):
    return Field(grid, rng.standard_normal(grid.shape)).with_dirichlet()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
