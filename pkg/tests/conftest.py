import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tipsim.robot import RobotGeometry, TransitionTable


@pytest.fixture(scope="session")
def geom():
    """Unit geometry used throughout: s = 1, w = sqrt(3)/2."""
    return RobotGeometry.from_sides(1.0, math.sqrt(3.0) / 2.0)


@pytest.fixture(scope="session")
def table():
    return TransitionTable.default()


@pytest.fixture(scope="session")
def table_sd():
    return TransitionTable.default(allow_sd_sd=True)


def angle_dist(a: float, b: float, period: float) -> float:
    d = abs(a - b) % period
    return min(d, period - d)
