import math

import pytest

from keplergeom.dynamics import KeplerSystem, OrbitState
from keplergeom.vector import Vec3

ECCENTRICITIES = (0.0, 0.1, 0.36, 0.7, 0.95)


def periapsis_state(e: float, a: float = 1.0, m: float = 1.0, k: float = 1.0) -> OrbitState:
    """Start at periapsis on the +x axis, moving counterclockwise in the xy-plane."""
    rp = a * (1.0 - e)
    vp = math.sqrt(k / (m * a) * (1.0 + e) / (1.0 - e))
    return OrbitState(Vec3(rp, 0.0, 0.0), Vec3(0.0, vp, 0.0))


@pytest.fixture
def unit():
    return KeplerSystem(1.0, 1.0)


@pytest.fixture
def circular():
    return OrbitState(Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0))


@pytest.fixture
def slow():
    """The running example: released at apoapsis r=1 with speed 0.8 (e = 0.36)."""
    return OrbitState(Vec3(1.0, 0.0, 0.0), Vec3(0.0, 0.8, 0.0))


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
