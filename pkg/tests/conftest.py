import numpy as np
import pytest

from damagewalk.model1 import Model1Params
from damagewalk.model2 import Model2Params


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def m2_ref():
    return Model2Params(lam=1.0, a=0.5, xi=1.0, mu_obs=1.0, m1=3, m=8, v=10.0)


@pytest.fixture
def m1_ref():
    return Model1Params(lam=1.0, c=0.5, p=(0.2, 0.3, 0.5), alpha_w=2.0, xi=1.0, m1=3, m=9, v=12.0)
