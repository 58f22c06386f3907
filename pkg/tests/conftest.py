"""Shared fixtures: default basis parameters, reference channels, and one
noiseless probe frame reused by the receiver/SVM tests."""

import numpy as np
import pytest

from cbwcs import (
    BasisParams,
    make_exponential_channel,
    make_probe,
    matched_filter,
    generate_baseband,
)


@pytest.fixture(scope="session")
def basis():
    return BasisParams()


@pytest.fixture(scope="session")
def ch2():
    """Two-path reference channel: delays 0/1 symbol periods, gamma 0.6."""
    return make_exponential_channel([0.0, 1.0], 0.6)


@pytest.fixture(scope="session")
def ch3():
    """Three-path channel: delays 0/1/2 symbol periods, gamma 0.6."""
    return make_exponential_channel([0.0, 1.0, 2.0], 0.6)


@pytest.fixture(scope="session")
def probe7():
    return make_probe("All7")


@pytest.fixture(scope="session")
def probe7_aligned(probe7, basis):
    """Noiseless matched-filter output of the All7 probe on the identity channel."""
    return matched_filter(generate_baseband(probe7, basis), basis)


@pytest.fixture(scope="session")
def rand_symbols():
    rng = np.random.default_rng(7)
    return rng.choice([-1.0, 1.0], size=200)
