import os

import pytest
from hypothesis import HealthCheck, settings

from subdiffinv.fraccalc import TimeGrid
from subdiffinv.spectral import dirichlet_laplacian_1d

# Mittag-Leffler interpolants are built lazily per (rho, mu), so the first
# example of a property can be slow; deadlines would only measure that.
settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def op16():
    return dirichlet_laplacian_1d(16, 128)


@pytest.fixture(scope="session")
def op64():
    return dirichlet_laplacian_1d(64, 512)


@pytest.fixture
def grid1024():
    return TimeGrid(1.0, 1024)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
