import numpy as np
import pytest

import helpers


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def ds_corpus():
    """Shared pool of random doubly stochastic channels over n in {2, 3, 4}."""
    out = []
    for n in (2, 3, 4):
        gen = np.random.default_rng(4000 + n)
        out.extend(helpers.random_ds_channel(n, gen) for _ in range(12))
    return out
