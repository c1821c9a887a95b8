""" pytest fixtures shared by the unit and e2e tests. """
import math

import pytest

from csbp.core import context
from csbp.core.mechanism import BranchingMechanism, LevyMeasure
from csbp.core.simulate import SimConfig


@pytest.fixture(autouse=True)
def clean_context():
    """ The run context is a singleton, every test starts with an empty one. """
    old = context.RunContext().values
    context.clear()

    yield context.RunContext()

    context.RunContext().values = old


@pytest.fixture
def feller():
    """ ``psi(lam) = lam + lam^2``, subcritical with rho = 1. """
    return BranchingMechanism.feller(a=-1.0, sigma=math.sqrt(2.0))


@pytest.fixture
def quadratic():
    """ ``psi(lam) = lam^2``, critical. """
    return BranchingMechanism.feller(a=0.0, sigma=math.sqrt(2.0))


@pytest.fixture
def stable():
    """ ``psi(lam) = lam^1.5``. """
    return BranchingMechanism.stable(alpha=1.5)


@pytest.fixture
def expjumps():
    """ Subcritical, with a Brownian part and exponential jumps. """
    levy = LevyMeasure.exponential(c=2.0, b=2.0)
    return BranchingMechanism(a=-1.0, sigma=1.0, levy=levy)


@pytest.fixture
def sim_config():
    return SimConfig(horizon=1.0, dt=0.01, eps=0.05, seed=7)
