import zlib

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from steklov.circlefn import FourierSeries

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng(request):
    # one stream per test, independent of execution order
    return np.random.default_rng(zlib.crc32(request.node.nodeid.encode()))


def real_series(max_band=6, scale=1.0):
    """Hypothesis strategy for real trigonometric polynomials."""
    @st.composite
    def build(draw):
        band = draw(st.integers(0, max_band))
        x = st.floats(-scale, scale, allow_nan=False, allow_infinity=False)
        pos = [complex(draw(x), draw(x)) for _ in range(band)]
        c0 = draw(x)
        c = [np.conj(v) for v in pos[::-1]] + [c0] + pos
        return FourierSeries(c, real=True)
    return build()


def complex_series(max_band=6):
    @st.composite
    def build(draw):
        band = draw(st.integers(0, max_band))
        x = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
        return FourierSeries([complex(draw(x), draw(x)) for _ in range(2 * band + 1)])
    return build()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
