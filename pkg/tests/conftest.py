import numpy as np
import pytest

from dumbbell_energy.graphs import DumbbellParams


def random_params(rng, nmax, case=None):
    """Random dumbbell triple with ``n <= nmax``, optionally of a fixed parity case."""
    while True:
        r = int(rng.integers(3, nmax - 1))
        s = int(rng.integers(3, nmax - 1))
        ell = int(rng.integers(1, nmax))
        if r + s + ell - 1 > nmax:
            continue
        p = DumbbellParams(r, s, ell)
        if case is None or p.case.value == case:
            return p


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
        for line in RESULTS:
            terminalreporter.write_line(line)
