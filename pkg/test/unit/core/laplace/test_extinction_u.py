# pylint: disable=missing-docstring
import math

import pytest

from csbp.core import exc
from csbp.core.laplace import (
    extinction_u,
    extinction_u_from_integral,
    survival_probability,
)
from csbp.core.mechanism import BranchingMechanism


def test_quadratic(quadratic):
    limit = extinction_u(quadratic, 2.0)

    assert limit.value == pytest.approx(0.5, rel=1e-6)
    assert len(limit.ladder) == len(limit.ladder_values)
    assert limit.extrapolants


def test_feller(feller):
    t = 1.0
    expected = math.exp(-t) / (1.0 - math.exp(-t))

    assert extinction_u(feller, t).value == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize('mech', [
    BranchingMechanism.feller(a=-1.0, sigma=math.sqrt(2.0)),
    BranchingMechanism.stable(alpha=1.5),
])
def test_ladder_agrees_with_the_integral(mech):
    assert extinction_u(mech, 0.5).value == pytest.approx(
        extinction_u_from_integral(mech, 0.5), rel=1e-6
    )


def test_needs_positive_time(feller):
    with pytest.raises(exc.DomainError):
        extinction_u(feller, 0.0)

    with pytest.raises(exc.DomainError):
        extinction_u_from_integral(feller, -1.0)


def test_survival_probability(quadratic):
    assert survival_probability(quadratic, 1.0, 1.0) == pytest.approx(
        1.0 - math.exp(-1.0), rel=1e-6
    )


def test_survival_probability_edges(quadratic):
    assert survival_probability(quadratic, 0.0, 1.0) == 0.0
    assert survival_probability(quadratic, 1.0, 0.0) == 1.0


def test_survival_needs_almost_sure_extinction():
    with pytest.raises(exc.DomainError):
        survival_probability(BranchingMechanism.feller(a=-1.0, sigma=0.0), 1.0, 1.0)
