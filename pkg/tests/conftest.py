import numpy as np
import pytest

from spikecal.spectra import LabeledSet, WavelengthGrid

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_set(X, y=None, start=100, step=1, tag="", prefix="s"):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, m = X.shape
    y = np.arange(n, dtype=float) if y is None else y
    grid = WavelengthGrid(start, start + step * (m - 1), step)
    return LabeledSet(tuple(f"{prefix}{i}" for i in range(n)), X, grid, tag, targets=y)
