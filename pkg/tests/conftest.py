import numpy as np
import pytest

from kgsoliton import SolitonFrame, make_grid


@pytest.fixture(scope="session")
def grid80():
    return make_grid(80.0, 4096)


@pytest.fixture(scope="session")
def frame80(grid80):
    return SolitonFrame.build(grid80)


@pytest.fixture(scope="session")
def grid_small():
    return make_grid(80.0, 2048)


@pytest.fixture(scope="session")
def frame_small(grid_small):
    return SolitonFrame.build(grid_small)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
