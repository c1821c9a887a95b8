# pylint: disable=missing-docstring
import math

import numpy as np
import pytest

from csbp.core import exc
from csbp.core.lamperti import StableDecomposition, stable_decompose, stable_theta_atoms
from csbp.core.mechanism import BranchingMechanism, LevyMeasure
from csbp.core.simulate import AtomSource, JumpAtom, SimConfig, simulate_qprocess
from csbp.testing import make_path


def test_theta_atoms(stable):
    atoms = [
        JumpAtom(0.1, 1.0, 2.0, 0.5, AtomSource.CSBP, 8.0, 10.0),
        JumpAtom(0.2, 9.0, 2.0, 0.5, AtomSource.CSBP, 8.0, 8.0, accepted=False),
        JumpAtom(0.3, math.nan, 2.0, math.nan, AtomSource.STAR, 8.0, 10.0),
    ]
    path = make_path([0.0, 1.0], [8.0, 8.0], atoms=atoms)

    assert stable_theta_atoms(path, stable) == [(0.1, pytest.approx(0.5))]


def test_needs_a_stable_mechanism(feller):
    with pytest.raises(exc.DomainError):
        stable_theta_atoms(make_path([0.0, 1.0], [1.0, 1.0]), feller)


@pytest.mark.parametrize('x', [1.0, 50.0])
def test_residual_vanishes_before_the_first_clamp(stable, x):
    config = SimConfig(horizon=2.0, dt=0.01, eps=0.05, seed=21)

    for idx in range(3):
        path = simulate_qprocess(stable, x, config.for_path(idx))
        decomposition = stable_decompose(path, stable)
        alive = decomposition.times < path.absorption_time

        scale = max(1.0, np.max(path.values))
        assert np.max(np.abs(decomposition.residual[alive])) <= 1e-8 * scale
        assert decomposition.simultaneous_jumps == 0
        assert len(decomposition.star_atoms) == len(path.atoms_from(AtomSource.STAR))


@pytest.mark.parametrize('mech', [
    BranchingMechanism(a=0.0, sigma=0.0, levy=LevyMeasure.stable(k=1.0, alpha=1.5)),
    BranchingMechanism(a=-2.0, sigma=1.0, levy=LevyMeasure.stable(k=1.0, alpha=1.5)),
])
def test_needs_a_pure_power(mech):
    with pytest.raises(exc.DomainError):
        stable_decompose(make_path([0.0, 1.0], [1.0, 1.0]), mech)


def test_simultaneous_jumps():
    decomposition = StableDecomposition(
        times=np.array([0.0, 1.0]),
        x_increments=np.zeros(2),
        s_increments=np.zeros(2),
        residual=np.zeros(2),
        theta_atoms=[(0.5, 1.0), (0.7, 2.0)],
        star_atoms=[(0.5, 0.3)],
    )

    assert decomposition.simultaneous_jumps == 1
    assert decomposition.max_residual == 0.0
