# pylint: disable=missing-docstring
import pytest

from csbp.core import exc
from csbp.core.mechanism import (
    BranchingMechanism,
    Criticality,
    classify,
    require_not_supercritical,
)


@pytest.mark.parametrize('a,expected', [
    (-1.0, Criticality.SUBCRITICAL),
    (0.0, Criticality.CRITICAL),
    (0.5, Criticality.SUPERCRITICAL),
])
def test_feller_sign_of_rho(a, expected):
    assert classify(BranchingMechanism.feller(a=a, sigma=1.0)) == expected


def test_normalized_stable_is_critical(stable):
    assert classify(stable) == Criticality.CRITICAL


def test_jumps_shift_rho(expjumps):
    assert classify(expjumps) == Criticality.SUBCRITICAL


def test_supercritical_cannot_be_conditioned():
    with pytest.raises(exc.UnsupportedError):
        require_not_supercritical(BranchingMechanism.feller(a=1.0, sigma=1.0))
