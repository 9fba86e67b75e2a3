import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scwqkd.states import SystemParams  # noqa: E402


@pytest.fixture
def params():
    """Operating point of the model link, Bessel-limit mode."""
    return SystemParams()


@pytest.fixture
def exact_params():
    return SystemParams(asymptotic=False)


@pytest.fixture
def ideal_params():
    # no phase jitter, perfect carrier filter
    return SystemParams(delta_phi=0.0, carrier_suppression=0.0)


DEG5 = math.radians(5.0)
