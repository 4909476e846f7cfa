import sys

import pytest

from cavity_cpf import REFERENCE_DURATION, REFERENCE_PARAMS, PulseSpec, default_grid, evolve, simulate, spectral_amplitudes


@pytest.fixture(scope="session")
def ref_pulse():
    return PulseSpec(REFERENCE_DURATION)


@pytest.fixture(scope="session")
def ref_grid(ref_pulse):
    return default_grid(REFERENCE_PARAMS, ref_pulse)


@pytest.fixture(scope="session")
def ref_c0(ref_pulse, ref_grid):
    return spectral_amplitudes(ref_pulse, ref_grid)


@pytest.fixture(scope="session")
def ref_run(ref_pulse, ref_grid):
    return simulate(REFERENCE_PARAMS, ref_pulse, ref_grid)


@pytest.fixture(scope="session")
def ref_stepped(ref_pulse, ref_grid, ref_c0):
    """Both branches with the fixed-step integrator (the slow oracle route)."""
    return {
        branch: evolve(ref_c0, REFERENCE_PARAMS, ref_grid, ref_pulse, branch, "stepped")
        for branch in ("uncoupled", "coupled")
    }


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
