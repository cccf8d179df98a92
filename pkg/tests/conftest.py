import pytest

from rsregimes.distributions import (Bernoulli, Constant, Exponential, Normal,
                                     SystemPair)

# Exponential means 1 and 1/1.1, so the gap is exactly 1 - 1/1.1.
TABLE1_MU2 = 1.0 / 1.1
TABLE1_DELTA = 1.0 - TABLE1_MU2


def make_gaussian_pair(sigma1: float = 1.0, sigma2: float = 1.0,
                       delta: float = 0.1) -> SystemPair:
    return SystemPair(Normal(0.0, sigma1), Normal(-delta, sigma2), delta)


@pytest.fixture
def exp_pair() -> SystemPair:
    return SystemPair(Exponential(1.0), Exponential(TABLE1_MU2), TABLE1_DELTA)


@pytest.fixture
def two_point_pair() -> SystemPair:
    return SystemPair(Constant(0.008), Bernoulli(0.001), 0.007)


@pytest.fixture
def gaussian_pair() -> SystemPair:
    return make_gaussian_pair()
