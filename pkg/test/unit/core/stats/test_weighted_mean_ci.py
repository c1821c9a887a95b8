# pylint: disable=missing-docstring
import math

import numpy as np
import pytest

from csbp.core import exc
from csbp.core.stats import MomentAccumulator, WeightedSample, weighted_mean_ci


def test_unit_weights_give_the_textbook_error():
    values = np.array([1.0, 2.0, 4.0, 7.0])
    est = weighted_mean_ci(values, multiplier=2.0)

    assert est.mean == pytest.approx(3.5)
    assert est.stderr == pytest.approx(np.std(values, ddof=1) / 2.0)
    assert est.half_width == pytest.approx(2.0 * est.stderr)
    assert est.n == 4


def test_accepts_weighted_samples():
    samples = [WeightedSample(1.0, 1.0), WeightedSample(4.0, 3.0)]

    assert weighted_mean_ci(samples).mean == pytest.approx(3.25)


def test_covers():
    est = weighted_mean_ci([0.0, 1.0], multiplier=1.0)

    assert est.interval == (0.0, 1.0)
    assert est.covers(1.0)
    assert not est.covers(1.01)


@pytest.mark.parametrize('values,weights,error', [
    ([1.0], None, exc.DomainError),
    ([1.0, 2.0], [1.0, -1.0], exc.DomainError),
    ([1.0, 2.0], [1.0], exc.DomainError),
    ([1.0, 2.0], [0.0, 0.0], exc.StatisticalError),
])
def test_errors(values, weights, error):
    with pytest.raises(error):
        weighted_mean_ci(values, weights)


def test_accumulator_matches_the_direct_estimate():
    rng = np.random.default_rng(0)
    values, weights = rng.normal(size=50), rng.exponential(size=50)

    first, second = MomentAccumulator(), MomentAccumulator()
    first.add(values[:20], weights[:20])
    second.add(values[20:], weights[20:])
    merged = first.merge(second).estimate()
    direct = weighted_mean_ci(values, weights)

    assert merged.n == 50
    assert merged.mean == pytest.approx(direct.mean, rel=1e-12)
    assert merged.stderr == pytest.approx(direct.stderr, rel=1e-9)


def test_accumulator_needs_samples():
    acc = MomentAccumulator()
    acc.add([1.0])

    with pytest.raises(exc.DomainError):
        acc.estimate()

    acc.add([2.0], [0.0])
    acc.sw = 0.0
    with pytest.raises(exc.StatisticalError):
        acc.estimate()


def test_effective_sample_size():
    from csbp.core.stats import effective_sample_size

    assert effective_sample_size([1.0, 1.0, 1.0, 1.0]) == 4.0
    assert effective_sample_size([1.0, 0.0, 0.0]) == 1.0
    assert effective_sample_size([0.0, 0.0]) == 0.0
    assert math.isclose(effective_sample_size([1.0, 3.0]), 16.0 / 10.0)


def test_stderr_matches_the_bootstrap():
    rng = np.random.default_rng(8)
    values = rng.exponential(1.0, 500)
    weights = rng.uniform(0.5, 1.5, 500)
    est = weighted_mean_ci(values, weights)

    resampled = []
    for _ in range(2000):
        idx = rng.integers(0, 500, 500)
        resampled.append(np.sum(weights[idx] * values[idx]) / np.sum(weights[idx]))

    assert est.stderr == pytest.approx(np.std(resampled), rel=0.1)
