# pylint: disable=missing-docstring
import dataclasses
import math

import pytest

from csbp.core import exc
from csbp.core.conf import RunConfig
from csbp.core.simulate import SimConfig
from csbp.core.verify import feller_benchmark, round_trip_check, round_trip_report


STEPS = [0.01, 0.005, 0.0025]


@pytest.mark.parametrize('errors,order', [
    ([0.04, 0.02, 0.01], 1.0),
    ([0.04, 0.01, 0.0025], 2.0),
])
def test_shrinking_errors_pass(errors, order):
    report = round_trip_report(STEPS, errors, 50)

    assert report.passed
    assert report.estimate == pytest.approx(order)
    assert report.details['clock_error'] == errors


@pytest.mark.parametrize('errors', [
    [0.03, 0.03, 0.03],
    [0.02, 0.025, 0.03],
    [0.04, 0.03, 0.025],
])
def test_errors_that_do_not_shrink_fail(errors):
    assert not round_trip_report(STEPS, errors, 50).passed


def test_vanishing_errors_pass():
    report = round_trip_report(STEPS, [0.0, 1e-15, 0.0], 50)

    assert report.passed
    assert math.isinf(report.estimate)


def test_needs_one_error_per_step():
    with pytest.raises(exc.DomainError):
        round_trip_report(STEPS, [0.1, 0.05], 50)


def test_round_trip_check_on_the_feller_benchmark():
    config = RunConfig(
        x=5.0, paths=10, sim=SimConfig(horizon=0.5, dt=0.01, eps=0.05, seed=4),
    )
    report = round_trip_check(feller_benchmark(), config)

    assert report.name == 'lamperti_round_trip'
    assert report.n == 10
    assert report.details['dt'] == pytest.approx([0.01, 0.005, 0.0025])
    assert report.passed


def test_round_trip_check_caps_the_paths():
    config = dataclasses.replace(
        RunConfig(paths=100), sim=SimConfig(horizon=0.2, dt=0.02, seed=1),
    )
    report = round_trip_check(feller_benchmark(), config, n_paths=4)

    assert report.n == 4
    assert len(report.details['value_error']) == 3
