import numpy as np
import pytest

from gaugeframe.models import make_kepler, make_linear_toy, make_relativistic_particle


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def particle():
    return make_relativistic_particle(1, 1.0)


@pytest.fixture
def particle3():
    return make_relativistic_particle(3, 1.0)


@pytest.fixture
def kepler():
    return make_kepler(1.0, 1.0, 0.05)


@pytest.fixture
def toy():
    return make_linear_toy(1.0, 1.0)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record one summary line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, passed, message):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {message}"
        lines.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
