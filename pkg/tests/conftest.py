import numpy as np
import pytest

from projchar.fixtures import make_rng


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture
def generic_pair_mats():
    """P = diag(1, 0), Q = projection onto (1, 1)/sqrt(2)."""
    return np.diag([1.0, 0.0]), np.full((2, 2), 0.5)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
