import numpy as np
import pytest

from vccdsa.network.model import ArchConfig
from vccdsa.phantom import PhantomConfig, make_sequence

TINY_ARCH = ArchConfig(scale_factor=0.125, rdb_growth=8)


@pytest.fixture(scope="session")
def tiny_phantom() -> PhantomConfig:
    return PhantomConfig(size=32, mask_frames=3, live_frames=2)


@pytest.fixture(scope="session")
def level2_seq(tiny_phantom):
    return make_sequence(tiny_phantom, level=2, seed=0)


@pytest.fixture(scope="session")
def level0_seq(tiny_phantom):
    return make_sequence(tiny_phantom, level=0, seed=0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(123)
