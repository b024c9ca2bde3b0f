"""Shared helpers for the test suite."""

import numpy as np
import pytest

import oracles


def random_rotation(rng, max_angle=np.pi * 0.95):
    """Uniform-axis rotation via the independent series oracle."""
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return oracles.series_exp_so3(axis * rng.uniform(0.0, max_angle))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
