import numpy as np
import pytest

from logitdyn import LogitSettings, PayoffParams, SolverConfig, make_grid, uniform_density

# Refined pure Nash root for (alpha, beta, gamma) = (1, 1, 1), from scipy.optimize.brentq on
# the polynomial form (2x - 1) = (x (1 - x))**2 at xtol 1e-15.
XHAT_REFINED = 0.5310100564595692


@pytest.fixture(scope="session")
def grid200():
    return make_grid(200)


@pytest.fixture(scope="session")
def uniform200(grid200):
    return uniform_density(grid200)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def config(eta, q, **kw):
    return SolverConfig(settings=LogitSettings(eta, q), params=PayoffParams(1.0, 1.0, 1.0), **kw)


# ---------------------------------------------------------------- acceptance report

CRITERIA = []


def record_criterion(number, title, ok, detail=""):
    CRITERIA.append((number, title, bool(ok), detail))
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(CRITERIA, key=lambda c: c[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
