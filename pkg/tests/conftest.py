import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spinlab import build_chart, build_product  # noqa: E402


def catalog_members():
    """(label, product, chart) for every built-in scenario geometry."""
    from spinlab.catalog import BUILTIN_SCENARIOS
    out = []
    for sc in BUILTIN_SCENARIOS:
        prod = build_product(sc["c1"], sc["c2"])
        chart = build_chart(sc["hypersurface"]["kind"],
                            sc["hypersurface"].get("params", {}))
        out.append((sc["name"], prod, chart))
    return out


@pytest.fixture(scope="session")
def members():
    return catalog_members()


def sample(chart, rng, n):
    return rng.uniform(chart.domain[:, 0], chart.domain[:, 1], size=(n, 3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
