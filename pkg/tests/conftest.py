import pytest

from infoam.model import PressureCondition, reference_spec
from infoam.solver import trace_curve
from infoam.closed import trace_curve_closed

KPA = 1e3
GRID_DP1 = (30, 60, 90)
GRID_DP2 = (-10, -40, -60)


@pytest.fixture(scope="session")
def spec():
    return reference_spec()


@pytest.fixture(scope="session")
def open_curves(spec):
    return {(a, b): trace_curve(spec, PressureCondition(a * KPA, b * KPA))
            for a in GRID_DP1 for b in GRID_DP2}


@pytest.fixture(scope="session")
def closed_curves(spec):
    return {(a, b): trace_curve_closed(spec, a * KPA, b * KPA)
            for a in GRID_DP1 for b in GRID_DP2}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
