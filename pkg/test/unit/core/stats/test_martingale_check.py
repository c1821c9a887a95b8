# pylint: disable=missing-docstring
import math

import numpy as np
import pytest

from csbp.core import exc
from csbp.core.mechanism import BranchingMechanism
from csbp.core.stats import martingale_check
from csbp.testing import make_path


def test_pre_sampled_values(feller):
    t_grid = [0.0, 1.0]
    values = np.array([[1.0, 0.0], [1.0, 2.0 * math.exp(-1.0)], [1.0, math.exp(-1.0)]])
    reports = martingale_check(values, feller, t_grid, x=1.0)

    assert [r.name for r in reports] == ['martingale[t=0]', 'martingale[t=1]']
    assert reports[1].estimate == pytest.approx(1.0)
    assert all(r.passed for r in reports)


def test_samples_paths(quadratic):
    paths = [
        make_path([0.0, 0.5, 1.0], [1.0, 2.0, 0.5]),
        make_path([0.0, 0.5, 1.0], [1.0, 0.0, 0.0]),
        make_path([0.0, 0.5, 1.0], [1.0, 1.0, 2.5]),
    ]
    reports = martingale_check(paths, quadratic, [0.75, 1.0])

    assert reports[0].estimate == pytest.approx(1.0)
    assert reports[1].estimate == pytest.approx(1.0)


def test_needs_x_with_values(feller):
    with pytest.raises(exc.DomainError):
        martingale_check(np.ones((3, 1)), feller, [1.0])


def test_supercritical_is_unsupported():
    with pytest.raises(exc.UnsupportedError):
        mech = BranchingMechanism.feller(a=1.0, sigma=1.0)
        martingale_check(np.ones((3, 1)), mech, [1.0], x=1.0)
