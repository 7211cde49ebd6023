import numpy as np
import pytest

from hydroelastic.energy import IllustrativeEnergy, admissible_c2_interval
from hydroelastic.optimizer import SolveConfig, maximize

ILLUSTRATIVE = dict(a=40.0, b=30.0, beta=0.5, d=0.5, r=4.0, s=3.0, p=4.0, alpha=2.0, delta=0.5)
G = 1.0
MU_STAR = 0.6


@pytest.fixture(scope="session")
def model():
    return IllustrativeEnergy(**ILLUSTRATIVE)


@pytest.fixture(scope="session")
def interval(model):
    return admissible_c2_interval(model, G, MU_STAR)


@pytest.fixture(scope="session")
def c2(interval):
    return interval.lo + 0.2 * (interval.hi - interval.lo)


@pytest.fixture(scope="session")
def solved(model, c2):
    return maximize(SolveConfig(model, c2, g=G, mu_star=MU_STAR, modes=128))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
