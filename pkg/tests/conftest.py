import numpy as np
import pytest

from edist.utils.parallel import set_num_threads


@pytest.fixture(autouse=True)
def single_thread():
    """Every test starts and ends with the inline (1-thread) runtime."""
    set_num_threads(1)
    yield
    set_num_threads(1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
