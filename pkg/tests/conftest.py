import numpy as np
import pytest

from buresforms import fixtures as fx
from buresforms.metric import bures_metric


@pytest.fixture(scope="session")
def metric_q1():
    return bures_metric(fx.Q1, fx.Q1_ORIENTATION)


@pytest.fixture(scope="session")
def metric_q2():
    return bures_metric(fx.Q2, fx.Q2_ORIENTATION)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
