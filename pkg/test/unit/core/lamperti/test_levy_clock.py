# pylint: disable=missing-docstring
import math

import numpy as np
import pytest
from scipy import integrate

from csbp.core.lamperti import csbp_clock, inverse_integral, levy_clock
from csbp.core.simulate import PathKind
from csbp.testing import make_path


def test_integrates_the_inverse_of_the_interpolant():
    path = make_path([0.0, 1.0, 2.0], [1.0, 2.0, 2.0], kind=PathKind.LEVY)
    change = levy_clock(path)

    assert np.allclose(change.target_times, [0.0, math.log(2.0), math.log(2.0) + 0.5])
    assert np.array_equal(change.source_times, path.times)
    assert change.absorbed_at is None


def test_stops_at_the_interpolated_zero():
    path = make_path([0.0, 1.0, 2.0], [2.0, 1.0, -1.0], kind=PathKind.LEVY)
    change = levy_clock(path)

    assert change.absorbed_at == pytest.approx(1.5)
    assert np.allclose(change.source_times, [0.0, 1.0, 1.5])
    assert np.allclose(change.target_times, [0.0, math.log(2.0), math.log(2.0) + 1.0])


def test_starting_at_zero_is_absorbed():
    path = make_path([0.0, 1.0], [0.0, 1.0], kind=PathKind.LEVY)

    assert levy_clock(path).absorbed_at == 0.0


def test_csbp_clock():
    path = make_path([0.0, 1.0, 2.0], [1.0, 3.0, 3.0], left_values=[1.0, 1.0, 3.0])

    assert np.allclose(csbp_clock(path).target_times, [0.0, 1.0, 4.0])


def test_csbp_clock_stops_at_extinction():
    path = make_path([0.0, 1.0, 2.0, 3.0], [1.0, 1.0, 0.0, 0.0], absorption_time=2.0)
    change = csbp_clock(path)

    assert change.absorbed_at == 2.0
    assert np.allclose(change.source_times, [0.0, 1.0, 2.0])
    assert np.allclose(change.target_times, [0.0, 1.0, 1.5])


@pytest.mark.parametrize('x0,x1', [
    (1.0, 3.0),
    (3.0, 1.0),
    (2.0, 2.0),
    (1.0, 1.0 + 1e-10),
])
def test_inverse_integral(x0, x1):
    expected, _ = integrate.quad(lambda s: 1.0 / (x0 + (x1 - x0) * s / 0.5), 0.0, 0.5)

    assert inverse_integral(0.5, x0, x1) == pytest.approx(expected, rel=1e-9)


def test_linear_path_clock_is_exact():
    # X_s = 1 + s gives C(s) = log(1 + s) on any grid
    times = np.linspace(0.0, 3.0, 7)
    path = make_path(times.tolist(), (1.0 + times).tolist(), kind=PathKind.LEVY)

    assert np.allclose(levy_clock(path).target_times, np.log1p(times), rtol=1e-12)
