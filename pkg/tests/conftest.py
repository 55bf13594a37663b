import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import subcoord as sc

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def pair_quadratic(backend=None):
    """x1 + x2 - x1 x2 / 2, L = 0.5."""
    return sc.QuadraticObjective([1.0, 1.0], [[0.0, -0.5], [-0.5, 0.0]], backend=backend)


def nondr_quadratic():
    return sc.QuadraticObjective([1.0, 1.0], [[0.4, -0.5], [-0.5, 0.4]])


@pytest.fixture
def pair_instance():
    return sc.ProblemInstance(pair_quadratic(), [1.0, 1.0], 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
