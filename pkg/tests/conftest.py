import numpy as np
import pytest

from growdom import Grid, GrowthFunction, ModelParams


@pytest.fixture
def unit_interval():
    return Grid((1.0,), (199,))


@pytest.fixture
def logistic_growth():
    return GrowthFunction.logistic(1.0, 2.0)


@pytest.fixture
def params_extinction(unit_interval, logistic_growth):
    """d=0.9, r=2, K=4, h=0.5 on the unit interval: below threshold."""
    return ModelParams(0.9, 2.0, 4.0, 0.5, logistic_growth, unit_interval)


@pytest.fixture
def params_persistence(unit_interval, logistic_growth):
    """d=0.9, r=4, K=4, h=0.5 on the unit interval: above threshold."""
    return ModelParams(0.9, 4.0, 4.0, 0.5, logistic_growth, unit_interval)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
