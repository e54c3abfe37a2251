import numpy as np
import pytest

from seamlab import make_rng
from seamlab.synth import synthetic_photo


@pytest.fixture
def rng():
    return make_rng(0)


@pytest.fixture
def photo():
    return synthetic_photo(96, 96, make_rng(7))


@pytest.fixture
def block_mask():
    mask = np.zeros((96, 96))
    mask[24:72, 30:78] = 1.0
    return mask
