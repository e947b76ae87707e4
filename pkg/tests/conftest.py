import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from noether_lab import models
from noether_lab.phasespace import sample_states

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cf3():
    """The 3-d constant-force model used by the bracket-table checks."""
    return models.constant_force_system(1.7, [0.0, 0.0, 2.3])


@pytest.fixture(scope="session")
def cf1():
    return models.constant_force_system(1.0, [2.0])


@pytest.fixture(scope="session")
def osc():
    return models.harmonic_system([1.0, 3.0])


@pytest.fixture(scope="session")
def states3():
    return sample_states(3, 100, seed=11)


def finite_floats(lo=-3.0, hi=3.0):
    from hypothesis import strategies as st

    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


def assert_close(a, b, tol):
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < tol
