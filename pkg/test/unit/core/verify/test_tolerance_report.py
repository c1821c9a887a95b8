# pylint: disable=missing-docstring
import math

import pytest

from csbp.core.stats import EstimateWithCI
from csbp.core.verify import agreement_reports, tolerance_report


@pytest.mark.parametrize('value,passed', [(1.05, True), (1.2, False), (0.9, True)])
def test_tolerance_report(value, passed):
    report = tolerance_report('ode', value, 1.0, 0.1)

    assert report.passed is passed
    assert report.band == 0.1
    assert report.n == 1


def test_agreement_pairs_every_estimator():
    estimates = {
        'direct': EstimateWithCI(1.00, 0.03, 100, 0.09),
        'survival': EstimateWithCI(1.05, 0.04, 50, 0.12),
        'importance': EstimateWithCI(1.50, 0.01, 200, 0.03),
    }
    reports = {r.name: r for r in agreement_reports(estimates, 3.0)}

    assert sorted(reports) == [
        'agreement[direct,importance]',
        'agreement[direct,survival]',
        'agreement[importance,survival]',
    ]
    close = reports['agreement[direct,survival]']
    assert close.stderr == pytest.approx(0.05)
    assert close.estimate == pytest.approx(-0.05)
    assert close.passed
    assert close.n == 50
    assert not reports['agreement[direct,importance]'].passed
    band = reports['agreement[importance,survival]'].band
    assert math.isclose(band, 3.0 * math.hypot(0.01, 0.04))
