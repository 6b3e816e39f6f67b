import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from data.radar_scan import RadarScan  # noqa: E402
from numerics.precision import precision  # noqa: E402


@pytest.fixture(autouse=True)
def double_precision():
    with precision("double"):
        yield


def random_scan(seed: int, n: int, labeled: bool = True, scan_id: str = "rand") -> RadarScan:
    """Tie-free random scan (continuous draws)."""
    rng = np.random.default_rng(seed)
    return RadarScan(
        positions=rng.uniform(-20.0, 20.0, size=(n, 2)),
        velocities=rng.normal(0.0, 3.0, size=n),
        rcs=rng.normal(0.0, 5.0, size=n),
        labels=rng.integers(0, 2, size=n) if labeled else None,
        scan_id=scan_id,
    )


@pytest.fixture
def make_scan():
    return random_scan
