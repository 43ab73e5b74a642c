import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cloudcolor.core import ColorPoint, ColorPointCloud, Role


def random_cloud(n, seed, extent=10.0):
    """Fully colored random cloud with float32-exact coordinates."""
    rng = np.random.default_rng(seed)
    pos = rng.uniform(0.0, extent, size=(n, 3)).astype(np.float32)
    colors = rng.integers(0, 256, size=(n, 3))
    points = [
        ColorPoint(float(x), float(y), float(z), color=(int(r), int(g), int(b)))
        for (x, y, z), (r, g, b) in zip(pos, colors)
    ]
    return ColorPointCloud(points=points, provenance=f"random(n={n},seed={seed})")


@pytest.fixture
def small_cloud():
    return random_cloud(20, seed=1)
