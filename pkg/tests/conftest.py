import numpy as np
import pytest

import helpers


@pytest.fixture(scope="session")
def bell():
    return helpers.bell_pair()


@pytest.fixture(scope="session")
def bell_rho(bell):
    return bell.density()


@pytest.fixture(scope="session")
def ghz():
    return helpers.ghz()


@pytest.fixture(scope="session")
def werner():
    return helpers.werner()


@pytest.fixture()
def gen():
    return np.random.default_rng(1234)
