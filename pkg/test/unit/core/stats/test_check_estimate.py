# pylint: disable=missing-docstring
import math

from csbp.core.stats import CheckReport, check_estimate, weighted_mean_ci


def test_passes_inside_the_band():
    est = weighted_mean_ci([0.9, 1.1, 1.0, 1.0])
    report = check_estimate('mean', est, 1.0, seed=3, t=0.5)

    assert report.passed
    assert report.seed == 3
    assert report.details == {'t': 0.5}


def test_fails_outside_the_band():
    est = weighted_mean_ci([0.9, 1.1, 1.0, 1.0])

    assert not check_estimate('mean', est, 2.0).passed


def test_to_dict_drops_non_finite_numbers():
    report = CheckReport('boxes', 1.0, math.nan, 0.0, 4.0, True, 10)
    data = report.to_dict()

    assert data['stderr'] is None
    assert data['pass'] is True
    assert 'details' not in data
