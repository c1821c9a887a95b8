# pylint: disable=missing-docstring
import math

import pytest

from csbp.core.laplace import csbp_mean, laplace_table, qprocess_mean


def test_one_row_per_pair(quadratic):
    rows = laplace_table(quadratic, 1.0, [0.5, 1.0], [0.0, 1.0, 2.0])

    assert len(rows) == 6
    assert {(r['theta'], r['t']) for r in rows} == {
        (theta, t) for theta in (0.5, 1.0) for t in (0.0, 1.0, 2.0)
    }


def test_values(quadratic):
    rows = laplace_table(quadratic, 1.0, [1.0], [1.0])

    assert rows[0]['u'] == pytest.approx(0.5, rel=1e-8)
    assert rows[0]['csbp_laplace'] == pytest.approx(math.exp(-0.5), rel=1e-8)
    assert rows[0]['qprocess_laplace'] == pytest.approx(math.exp(-0.5) / 4.0, rel=1e-8)


def test_time_zero_is_the_initial_law(feller):
    row = laplace_table(feller, 2.0, [0.3], [0.0])[0]

    assert row['u'] == 0.3
    assert row['qprocess_laplace'] == pytest.approx(math.exp(-0.6))


def test_means(feller, quadratic, stable):
    assert csbp_mean(feller, 2.0, 1.0) == pytest.approx(2.0 * math.exp(-1.0))
    assert qprocess_mean(feller, 1.0, 1.0) == pytest.approx(
        math.exp(-1.0) + 2.0 * (1.0 - math.exp(-1.0))
    )
    assert qprocess_mean(quadratic, 1.0, 3.0) == pytest.approx(7.0)
    assert math.isinf(qprocess_mean(stable, 1.0, 1.0))
