import numpy as np
import pytest

from lvess import LotkaVolterraModel, embed_lotka_volterra

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def sym2():
    """r=(1,1), b=[[2,1],[1,2]], C=(1,1), embedded."""
    return embed_lotka_volterra(LotkaVolterraModel([1.0, 1.0], [[2.0, 1.0], [1.0, 2.0]])).model


@pytest.fixture
def boundary2():
    """r=(1,0.5), b=[[1,0.9],[0.9,1]]; ESS on the boundary at (1,0)."""
    return embed_lotka_volterra(LotkaVolterraModel([1.0, 0.5], [[1.0, 0.9], [0.9, 1.0]])).model


@pytest.fixture
def logistic():
    return embed_lotka_volterra(LotkaVolterraModel([2.0], [[4.0]])).model


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
