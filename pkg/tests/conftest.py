import numpy as np
import pytest

from kgwick import evolution as ev
from kgwick import scattering as sc
from kgwick.grid import make_grid


@pytest.fixture
def grid1():
    return make_grid(1, 64, 16.0, 1.0, 0.1)


@pytest.fixture
def grid2():
    return make_grid(2, 16, 8.0, 1.0, 0.1)


@pytest.fixture
def mp_small():
    # short matching time and coarse step keep unit tests fast
    return sc.MatchingParams(3.0, ev.IntegratorParams(0.02, 4))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Lines echoed in the terminal summary, one per acceptance criterion."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
