import pytest

from coinroute import WaveSchedule, build_topology

# two parallel 2-hop routes with different costs
DIAMOND = """
node S zero
node A affine 0 1
node B affine 1 1
node D zero
edge S A
edge S B
edge A D
edge B D
demand S D 2
"""

# single fixed route, no decisions anywhere
LINE = """
node S zero
node M affine 0 1
node D zero
edge S M
edge M D
demand S D 1
"""

# two sources sharing a superlinear middle link, each with a flat private one
SHARED = """
node X zero
node Y zero
node SH power 1 2
node AX affine 2 0
node AY affine 2 0
node DX zero
node DY zero
edge X SH
edge X AX
edge SH DX
edge AX DX
edge Y SH
edge Y AY
edge SH DY
edge AY DY
demand X DX 1
demand Y DY 1
"""


@pytest.fixture
def diamond():
    return build_topology(DIAMOND)


@pytest.fixture
def line():
    return build_topology(LINE)


@pytest.fixture
def shared():
    return build_topology(SHARED)


@pytest.fixture
def sched24():
    return WaveSchedule(L=2, W=4, measure_start=2, total_waves=12)
