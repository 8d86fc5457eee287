import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def separable_clusters(rng, n_per_class=10, dim=2, gap=3.0):
    """Two Gaussian blobs far enough apart to be linearly separable."""
    center = np.zeros(dim)
    center[0] = gap
    pos = rng.normal(size=(n_per_class, dim)) * 0.5 + center
    neg = rng.normal(size=(n_per_class, dim)) * 0.5 - center
    X = np.vstack([pos, neg])
    y = np.array([1] * n_per_class + [-1] * n_per_class)
    return X, y


def three_clusters(rng, n_per_class=15, spread=0.4):
    centers = np.array([[0.0, 4.0], [-4.0, -2.0], [4.0, -2.0]])
    X = np.vstack([rng.normal(size=(n_per_class, 2)) * spread + c for c in centers])
    y = np.repeat(np.arange(3), n_per_class)
    return X, y


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
