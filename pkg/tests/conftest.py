import functools

import numpy as np
import pytest

from trapsurf import catalog


@functools.lru_cache(maxsize=None)
def cat(name, **params):
    """Catalog objects are immutable, so share one instance per test run."""
    return catalog.instantiate(name, **params)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
