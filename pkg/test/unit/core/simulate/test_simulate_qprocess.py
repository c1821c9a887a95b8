# pylint: disable=missing-docstring
import math

import numpy as np
import pytest

from csbp.core import exc, laplace, verify
from csbp.core.mechanism import BranchingMechanism, TailWeight
from csbp.core.simulate import (
    AtomSource,
    PathKind,
    SimConfig,
    scaled_cutoff,
    simulate_qprocess,
)
from csbp.core.stats import campbell_check, weighted_mean_ci


def test_immigration_atoms(stable):
    config = SimConfig(horizon=3.0, dt=0.01, eps=0.05, seed=4)
    path = simulate_qprocess(stable, 1.0, config)
    star = path.atoms_from(AtomSource.STAR)

    assert star
    for atom in star:
        assert math.isnan(atom.nu)
        assert math.isnan(atom.u)
        assert atom.accepted
        assert atom.z_after == pytest.approx(atom.z_before + atom.r)
        assert atom.r >= config.eps


def test_state_is_never_negative(feller, sim_config):
    for idx in range(5):
        path = simulate_qprocess(feller, 0.1, sim_config.for_path(idx))

        assert np.all(path.values >= 0)
        assert len(path.brownian_increments) == len(path.times) - 1
        assert path.times[-1] == pytest.approx(path.horizon)


def test_longer_horizon_extends_the_path(expjumps):
    short = simulate_qprocess(expjumps, 1.0, SimConfig(1.0, 0.01, 0.05, 5))
    long = simulate_qprocess(expjumps, 1.0, SimConfig(2.0, 0.01, 0.05, 5))
    n = len(short.times)

    assert np.array_equal(long.times[:n], short.times)
    assert np.array_equal(long.values[:n], short.values)
    assert np.array_equal(long.brownian_increments[:n - 1], short.brownian_increments)
    assert long.atoms[:len(short.atoms)] == short.atoms


def test_supercritical_is_unsupported(sim_config):
    with pytest.raises(exc.UnsupportedError):
        simulate_qprocess(BranchingMechanism.feller(a=1.0, sigma=1.0), 1.0, sim_config)


def test_needs_almost_sure_extinction(sim_config):
    with pytest.raises(exc.DomainError):
        simulate_qprocess(BranchingMechanism.feller(a=-1.0, sigma=0.0), 1.0, sim_config)


def test_stable_jump_count_does_not_grow_with_the_state(stable):
    config = SimConfig(horizon=1.0, dt=1e-3, eps=1e-2, seed=3, max_jumps=5000)
    path = simulate_qprocess(stable, 1e6, config)
    branching = path.atoms_from(AtomSource.CSBP)

    assert branching
    assert len(path.atoms) < 5000
    assert np.all(np.isfinite(path.values))
    assert min(atom.r for atom in branching) > 1.0


@pytest.mark.parametrize('kind,mech_name,scaled', [
    (PathKind.QPROCESS, 'stable', True),
    (PathKind.CSBP, 'stable', False),
    (PathKind.LEVY, 'stable', False),
    (PathKind.QPROCESS, 'expjumps', False),
])
def test_only_stable_qprocess_paths_scale_the_cutoff(request, kind, mech_name, scaled):
    assert scaled_cutoff(kind, request.getfixturevalue(mech_name)) is scaled


MC_CONFIG = SimConfig(horizon=1.0, dt=0.01, eps=0.05, seed=17)


def qprocess_finals(mech, n_paths, config=MC_CONFIG):
    paths = [simulate_qprocess(mech, 1.0, config.for_path(i)) for i in range(n_paths)]
    return np.array([p.final_value for p in paths]), paths


def test_feller_mean_matches_the_oracle(feller):
    finals, paths = qprocess_finals(feller, 2000)
    target = laplace.qprocess_mean(feller, 1.0, 1.0)

    assert target == pytest.approx(2.0 - math.exp(-1.0))
    assert weighted_mean_ci(finals, multiplier=4.0).covers(target)
    assert np.mean([p.absorbed for p in paths]) <= 0.01


def test_critical_laplace_matches_the_oracle(quadratic):
    finals, _ = qprocess_finals(quadratic, 2000)
    target = laplace.qprocess_laplace(quadratic, 1.0, 1.0, 1.0)

    assert target == pytest.approx(math.exp(-0.5) / 4.0, rel=1e-6)
    assert weighted_mean_ci(np.exp(-finals), multiplier=4.0).covers(target)


def test_refinements_agree(expjumps):
    coarse = SimConfig(horizon=1.0, dt=0.02, eps=0.1, seed=23)
    estimates = {
        'coarse': weighted_mean_ci(
            np.exp(-qprocess_finals(expjumps, 1000, coarse)[0]), multiplier=4.0
        ),
        'fine': weighted_mean_ci(
            np.exp(-qprocess_finals(expjumps, 1000)[0]), multiplier=4.0
        ),
    }
    target = laplace.qprocess_laplace(expjumps, 1.0, 1.0, 1.0)

    assert all(r.passed for r in verify.agreement_reports(estimates, 4.0))
    assert all(est.covers(target) for est in estimates.values())


def test_immigration_intensity():
    mech = verify.marking_benchmark()
    _, paths = qprocess_finals(mech, 1000)
    big = [[a.r for a in p.atoms_from(AtomSource.STAR)] for p in paths]
    report = campbell_check(
        big, lambda r: (r >= 1.0).astype(float), 2.0, multiplier=4.0,
    )

    assert mech.levy.tail_rate(1.0, TailWeight.SIZE_BIASED) == pytest.approx(2.0)
    assert report.passed
