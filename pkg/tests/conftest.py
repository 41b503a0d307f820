import numpy as np
import pytest

from tomoments import SourceProfile, make_uniform_array, true_covariance

# scenario used throughout the benchmark figures
REFERENCE_Z0 = 10.0
REFERENCE_SIGMA_Z = 5.0
REFERENCE_P = 100.0
REFERENCE_NOISE = 10.0


@pytest.fixture(scope="session")
def reference_array():
    return make_uniform_array(7, 100.0)


@pytest.fixture(scope="session")
def uniform_profile():
    return SourceProfile("uniform", REFERENCE_Z0, REFERENCE_SIGMA_Z, REFERENCE_P)


@pytest.fixture(scope="session")
def gaussian_profile():
    return SourceProfile("gaussian", REFERENCE_Z0, REFERENCE_SIGMA_Z, REFERENCE_P)


@pytest.fixture(scope="session")
def point_profile():
    return SourceProfile("point", REFERENCE_Z0, 0.0, REFERENCE_P)


@pytest.fixture(scope="session")
def reference_covariance(uniform_profile, reference_array):
    return true_covariance(uniform_profile, reference_array, REFERENCE_NOISE)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260817)
