import numpy as np
import pytest

from lfunlab.newforms import ramanujan_delta


@pytest.fixture(scope="session")
def delta():
    """Workhorse form: enough coefficients for evaluation and scans."""
    return ramanujan_delta(8192)


@pytest.fixture(scope="session")
def delta_big():
    """Large coefficient range for Dirichlet-series tail work."""
    return ramanujan_delta(65536)


@pytest.fixture(scope="session")
def rng():
    return np.random.RandomState(20260811)
