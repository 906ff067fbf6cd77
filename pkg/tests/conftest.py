import math

import numpy as np
import pytest

from wgmesh.geometry import MeshGeometry

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
GEOMETRIES = list(MeshGeometry)


@pytest.fixture(params=GEOMETRIES, ids=lambda g: g.value)
def geometry(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
