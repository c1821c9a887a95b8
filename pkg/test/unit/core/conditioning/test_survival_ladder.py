# pylint: disable=missing-docstring
import math

import pytest

from csbp.core import exc
from csbp.core.conditioning import (
    MIN_ACCEPTED,
    SurvivalEstimate,
    best_rung,
    s_ladder,
    survival_conditioned_expectation,
    survival_ladder,
)
from csbp.core.mechanism import BranchingMechanism
from csbp.core.simulate import SimConfig
from csbp.core.stats import EstimateWithCI


CONFIG = SimConfig(horizon=1.0, dt=0.01, eps=0.05, seed=11)


def final_value(path):
    return path.final_value


def rung(s, accepted, estimate=True):
    est = EstimateWithCI(1.0, 0.1, accepted, 0.3)
    return SurvivalEstimate(s, est if estimate else None, est, 0.5, accepted, 100)


def test_s_ladder(feller, quadratic):
    assert s_ladder(quadratic) == [1.0, 2.0, 5.0, 10.0, 20.0]
    fast = BranchingMechanism.feller(a=-2.0, sigma=1.0)
    assert s_ladder(fast) == [0.5, 1.0, 2.5, 5.0, 10.0]
    assert s_ladder(feller) == s_ladder(quadratic)


def test_conditioned_expectation(feller):
    result = survival_conditioned_expectation(
        feller, 1.0, 0.5, 0.5, final_value, 200, CONFIG
    )

    assert result.n_paths == 200
    assert 2 <= result.accepted <= 200
    assert result.acceptance.mean == pytest.approx(result.accepted / 200)
    assert result.acceptance_target == pytest.approx(
        -math.expm1(-math.exp(-1.0) / -math.expm1(-1.0)), rel=1e-6
    )
    # Surviving paths are alive at t + s.
    assert result.estimate.mean > 0


def test_needs_positive_s(feller):
    with pytest.raises(exc.DomainError):
        survival_conditioned_expectation(feller, 1.0, 0.5, 0.0, final_value, 10, CONFIG)


def test_too_few_survivors(quadratic):
    with pytest.raises(exc.StatisticalError):
        survival_conditioned_expectation(
            quadratic, 0.01, 0.5, 1.0, final_value, 2, CONFIG
        )


def test_ladder_keeps_failed_rungs(quadratic):
    rows = survival_ladder(quadratic, 0.01, 0.5, final_value, 2, CONFIG, ladder=[1.0])

    assert len(rows) == 1
    assert rows[0].estimate is None
    assert rows[0].to_dict()['estimate'] is None
    assert best_rung(rows) is None


def test_best_rung_is_the_largest_usable_s():
    rows = [
        rung(1.0, 500),
        rung(2.0, 100),
        rung(5.0, MIN_ACCEPTED - 1),
        rung(10.0, 0, estimate=False),
    ]

    assert best_rung(rows).s == 2.0


def test_acceptance_rate_matches_survival_probability(feller):
    result = survival_conditioned_expectation(
        feller, 1.0, 0.5, 0.5, final_value, 1000, CONFIG, multiplier=4.0
    )

    assert result.acceptance.n == 1000
    assert result.acceptance.covers(result.acceptance_target)
