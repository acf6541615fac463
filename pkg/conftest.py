import numpy as np
import pytest

from dynamics import retrieve
from fockchannel import PureState
from modes import TimeGrid
from protocols import build_protocol

FIG7 = dict(kappa=4., g=2., gamma=0.01, T=4.)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_state(rng):
    def draw(dim):
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return PureState.normalized(z)
    return draw


@pytest.fixture
def write_grid():
    return TimeGrid(-20., 0., 40001)


@pytest.fixture(scope='session')
def qswitch_protocol():
    return build_protocol('qswitch', kappa=1., kappa_s=0.1, T=2.)


@pytest.fixture(scope='session')
def qswitch_retrieval(qswitch_protocol):
    return retrieve(qswitch_protocol)


@pytest.fixture(scope='session')
def gate_protocol():
    return build_protocol('coupling_gate', **FIG7)


@pytest.fixture(scope='session')
def gate_retrieval(gate_protocol):
    return retrieve(gate_protocol)
