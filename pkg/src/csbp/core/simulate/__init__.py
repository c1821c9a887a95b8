"""
######################
Pathwise simulation
######################

.. module:: csbp.core.simulate
    :synopsis: Euler schemes for the CSBP, its Q-process and the driving Levy process.

Three kinds of paths share one engine:

* ``csbp``: the branching process driven by a Poisson measure on
  ``(time, nu, size)``. Jumps are generated by thinning: candidates arrive at
  rate ``Z * Pi([eps, inf))`` frozen at the start of each Euler step and are
  accepted when their ``nu`` coordinate lies below the current state.
* ``qprocess``: the process conditioned on non-extinction. On top of the
  ``csbp`` dynamics it receives immigration from an independent Poisson
  measure with intensity ``ds x r Pi(dr)`` and a drift ``sigma^2``.
* ``levy``: the spectrally positive Levy process with the same triplet, used
  by the Lamperti transforms.

Jumps below the cutoff ``eps`` are dropped. For ``csbp`` and ``levy`` their
compensated sum has mean zero; for the Q-process immigration they are put
back as their mean drift ``int_(0,eps) r^2 Pi(dr)``. Stable Q-process paths
raise the branching cutoff with the state above 1, see
`csbp.core.mechanism.LevyMeasure.state_cutoff`.

Every path is a pure function of ``(mechanism, x, config)``; randomness comes
from counter based streams keyed by ``(seed, path_index)``.
"""
from .types import AtomSource, JumpAtom, PathKind, SimConfig, SimPath
from .engine import (
    scaled_cutoff,
    simulate_csbp,
    simulate_levy,
    simulate_path,
    simulate_qprocess,
)
from .ensemble import run_ensemble


__all__ = [
    'AtomSource',
    'JumpAtom',
    'PathKind',
    'SimConfig',
    'SimPath',
    'run_ensemble',
    'scaled_cutoff',
    'simulate_csbp',
    'simulate_levy',
    'simulate_path',
    'simulate_qprocess',
]
