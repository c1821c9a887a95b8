# pylint: disable=missing-docstring
import math

import pytest

from csbp.core import exc
from csbp.core.laplace import UFamily, closed_form_u


def test_quadratic():
    assert closed_form_u(UFamily.QUADRATIC, 1.0, 1.0) == 0.5
    assert closed_form_u('quadratic', 0.0, 5.0) == 0.0


def test_stable_two_is_quadratic():
    assert closed_form_u('stable', 3.0, 2.0, alpha=2.0) == pytest.approx(3.0 / 7.0)


def test_linear_quadratic_decays_exponentially():
    value = closed_form_u('linear_quadratic', 1.0, 1.0, linear=1.0)

    assert value == pytest.approx(math.exp(-1.0) / (2.0 - math.exp(-1.0)))


@pytest.mark.parametrize('kwargs', [
    dict(family='stable', alpha=None),
    dict(family='stable', alpha=0.9),
    dict(family='linear_quadratic', linear=0.0),
])
def test_missing_parameters(kwargs):
    with pytest.raises(exc.DomainError):
        closed_form_u(theta=1.0, t=1.0, **kwargs)


def test_unknown_family():
    with pytest.raises(ValueError):
        closed_form_u('cubic', 1.0, 1.0)
