import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kerrline import CircuitParams, build_modes, derive, solve_spectrum  # noqa: E402
from kerrline.spectrum import default_grid, sweep_spectrum  # noqa: E402

DEVICE = dict(l=5e-7, c=2e-10, C_J=1.9e-12)
LENGTH = 0.010


@pytest.fixture(scope="session")
def params():
    return CircuitParams(L=LENGTH, I_c=1e-6, C_c=5e-15, **DEVICE)


@pytest.fixture(scope="session")
def derived(params):
    return derive(params)


@pytest.fixture(scope="session")
def spectrum(params):
    return solve_spectrum(params, 10)


@pytest.fixture(scope="session")
def modeset(params, spectrum):
    return build_modes(params, spectrum)


@pytest.fixture(scope="session")
def default_sweep(params):
    return sweep_spectrum(params, default_grid(), 10)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
