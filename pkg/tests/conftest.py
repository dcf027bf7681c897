import numpy as np
import pytest

from isosynth.linalg import haar_unitary

_LOG_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG_KEY] = []


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[_LOG_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_u2(rng):
    return haar_unitary(2, rng)


def random_su2(rng):
    u = haar_unitary(2, rng)
    return u / np.sqrt(np.linalg.det(u))
