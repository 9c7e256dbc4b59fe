from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from coprox.regions import NEG_INF, POS_INF, Interval, normalize

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

# endpoints on the half-integer grid keep every case analysis reachable
grid = st.integers(-8, 8).map(lambda n: Fraction(n, 2))


@st.composite
def intervals(draw):
    lo, hi = sorted((draw(grid), draw(grid)))
    if draw(st.integers(0, 6)) == 0:
        lo = NEG_INF
    if draw(st.integers(0, 6)) == 0:
        hi = POS_INF
    if lo == hi:
        return Interval.point(lo)
    return Interval(lo, hi, draw(st.booleans()) and lo != NEG_INF, draw(st.booleans()) and hi != POS_INF)


raw_intervals = st.lists(intervals(), max_size=4)
regions = raw_intervals.map(normalize)
nonempty_regions = regions.filter(lambda r: not r.is_empty)

# probes on the quarter grid hit every endpoint and every gap between them
PROBES = [Fraction(n, 4) for n in range(-40, 41)]


@pytest.fixture
def probes():
    return PROBES


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
