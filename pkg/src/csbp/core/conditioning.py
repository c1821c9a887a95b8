"""
.. module:: csbp.core.conditioning
    :synopsis: The h-transform, its estimators, jump marking and Girsanov.

Conditioning on non-extinction is the change of measure with density
``D_t = exp(rho t) Z_t / x``. This module realizes it three ways:

* weighting unconditioned paths by ``D_t`` (`importance_expectation`),
* keeping only the paths that survive a long extra time ``s``
  (`survival_conditioned_expectation`), and
* reading the weighted jumps as retained jumps plus immigrants
  (`mark_jumps`) together with the drift corrected Brownian motion
  (`girsanov_residual`).

`simulate_qprocess` gives the fourth, direct, view used to cross-check them.
"""
import dataclasses
import enum
import functools
import math
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import exc, log
from .laplace import survival_probability
from .mechanism import (
    BranchingMechanism,
    Criticality,
    classify,
    require_not_supercritical,
)
from .simulate import AtomSource, PathKind, SimConfig, SimPath
from .simulate.ensemble import run_ensemble
from .stats import DEFAULT_MULTIPLIER, EstimateWithCI, WeightedSample, weighted_mean_ci


PathFunctional = Callable[[SimPath], float]
S_LADDER = (1.0, 2.0, 5.0, 10.0, 20.0)
MIN_ACCEPTED = 30


class MarkKind(str, enum.Enum):
    RETAINED = 'retained'
    IMMIGRANT = 'immigrant'
    NULL = 'null'


@dataclasses.dataclass(frozen=True)
class MarkedAtom:
    """ A jump atom after marking.

    ``delta_big`` is ``(r, nu)`` for a retained jump and ``(0, 0)``
    otherwise; ``delta_star`` is the immigrant size, 0 unless immigrant.
    """
    t: float
    kind: MarkKind
    delta_big: Tuple[float, float]
    delta_star: float
    r: float
    nu: float
    accepted: bool = True


@dataclasses.dataclass
class SurvivalEstimate:
    """ Result of conditioning on survival up to ``t + s``. """
    s: float
    estimate: Optional[EstimateWithCI]
    acceptance: EstimateWithCI
    acceptance_target: float
    accepted: int
    n_paths: int

    def to_dict(self):
        return {
            's': self.s,
            'estimate': self.estimate.to_dict() if self.estimate else None,
            'acceptance_rate': self.acceptance.mean,
            'acceptance_stderr': self.acceptance.stderr,
            'acceptance_target': self.acceptance_target,
            'accepted': self.accepted,
            'n': self.n_paths,
        }


@dataclasses.dataclass
class GirsanovResidual:
    """ ``B^up = B - sigma int Z^(-1/2) ds`` per interval of the path grid. """
    times: np.ndarray
    increments: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.increments))


def hweight(path: SimPath, mech: BranchingMechanism, t: float) -> float:
    """ ``D_t = exp(rho t) Z_t / x``, 0 once the path is absorbed. """
    return math.exp(mech.rho * t) * path.value_at(t) / path.x


def weighted_sample(
    path: SimPath,
    mech: BranchingMechanism,
    t: float,
    functional: PathFunctional,
) -> WeightedSample:
    weight = hweight(path, mech, t)
    # Absorbed paths carry no weight; the functional may not be defined there.
    value = functional(path) if weight > 0 else 0.0
    return WeightedSample(value, weight)


def importance_expectation(
    paths: Sequence[SimPath],
    mech: BranchingMechanism,
    t: float,
    functional: PathFunctional,
    multiplier: float = DEFAULT_MULTIPLIER,
) -> EstimateWithCI:
    """ ``E^up F = E[F D_t]`` by the self-normalized weighted mean.

    Raises:
        DomainError: empty ensemble.
        UnsupportedError: supercritical mechanism.
    """
    require_not_supercritical(mech)
    if not paths:
        raise exc.DomainError("empty ensemble")

    samples = [weighted_sample(p, mech, t, functional) for p in paths]
    return weighted_mean_ci(samples, multiplier=multiplier)


def s_ladder(mech: BranchingMechanism) -> List[float]:
    """ Extra survival times: multiples of ``1/rho``, or plain when critical. """
    require_not_supercritical(mech)
    if classify(mech) == Criticality.CRITICAL:
        return list(S_LADDER)
    return [s / mech.rho for s in S_LADDER]


def survival_conditioned_expectation(
    mech: BranchingMechanism,
    x: float,
    t: float,
    s: float,
    functional: PathFunctional,
    n_paths: int,
    config: SimConfig,
    threads: Optional[int] = None,
    multiplier: float = DEFAULT_MULTIPLIER,
) -> SurvivalEstimate:
    """ ``E[F | T > t + s]`` from unconditioned paths run to ``t + s``.

    *functional* must be picklable when *threads* > 1.

    Raises:
        DomainError: ``s <= 0`` or extinction is not almost sure.
        StatisticalError: fewer than 2 paths survived; use more paths or a
            smaller ``s``.
    """
    if not s > 0:
        raise exc.DomainError(f"s must be > 0, got {s}")

    horizon = t + s
    target = survival_probability(mech, x, horizon)
    run_config = dataclasses.replace(config, horizon=horizon)

    results = run_ensemble(
        PathKind.CSBP, mech, x, run_config, n_paths,
        summarize=functools.partial(_survival_summary, functional=functional),
        threads=threads,
    )
    survived = np.array([ok for ok, _ in results], dtype=float)
    values = [value for ok, value in results if ok]

    acceptance = weighted_mean_ci(survived, multiplier=multiplier)
    log.detail(
        "s={:g}: {} of {} paths survived (oracle rate {:.5f})",
        s, len(values), n_paths, target,
    )

    if len(values) < 2:
        raise exc.StatisticalError(
            f"{len(values)} of {n_paths} paths survived to t+s={horizon:g}; "
            "use more paths or a smaller s"
        )

    return SurvivalEstimate(
        s=s,
        estimate=weighted_mean_ci(values, multiplier=multiplier),
        acceptance=acceptance,
        acceptance_target=target,
        accepted=len(values),
        n_paths=n_paths,
    )


def survival_ladder(
    mech: BranchingMechanism,
    x: float,
    t: float,
    functional: PathFunctional,
    n_paths: int,
    config: SimConfig,
    ladder: Optional[Sequence[float]] = None,
    threads: Optional[int] = None,
    multiplier: float = DEFAULT_MULTIPLIER,
) -> List[SurvivalEstimate]:
    """ `survival_conditioned_expectation` over the s-ladder.

    Rungs where too few paths survive are kept in the table with no estimate.
    """
    rows = []
    for s in ladder or s_ladder(mech):
        try:
            rows.append(survival_conditioned_expectation(
                mech, x, t, s, functional, n_paths, config, threads, multiplier,
            ))
        except exc.StatisticalError as ex:
            log.detail("s={:g}: {}", s, ex.detail)
            rows.append(SurvivalEstimate(
                s=s,
                estimate=None,
                acceptance=EstimateWithCI(0.0, 0.0, n_paths, 0.0, multiplier),
                acceptance_target=survival_probability(mech, x, t + s),
                accepted=0,
                n_paths=n_paths,
            ))

    return rows


def best_rung(rows: Sequence[SurvivalEstimate]) -> Optional[SurvivalEstimate]:
    """ Largest s with at least ``MIN_ACCEPTED`` surviving paths. """
    usable = [row for row in rows if row.estimate and row.accepted >= MIN_ACCEPTED]
    return max(usable, key=lambda row: row.s) if usable else None


def mark_jumps(path: SimPath) -> List[MarkedAtom]:
    """ Split the branching jumps into retained jumps and immigrants.

    An atom at ``t_n`` with ``Z_{t_n} > 0`` is an immigrant of size
    ``r_n 1{nu_n <= Z_{t_n-}}`` when ``u_n > Z_{t_n-} / Z_{t_n}`` and a retained
    jump ``(r_n, nu_n)`` otherwise. Thinned candidates have ratio 1 and are
    always retained. Immigration (``star``) atoms are not marked.

    Raises:
        DomainError: an atom without its uniform mark.
    """
    marked = []

    for atom in path.atoms:
        if atom.source != AtomSource.CSBP:
            continue
        if not 0.0 <= atom.u <= 1.0:
            raise exc.DomainError(f"atom at t={atom.t:.6g} has no uniform mark")

        delta_big = (0.0, 0.0)
        delta_star = 0.0

        if atom.z_after <= 0:
            kind = MarkKind.NULL
        elif atom.u > atom.z_before / atom.z_after:
            kind = MarkKind.IMMIGRANT
            delta_star = atom.r if atom.accepted else 0.0
        else:
            kind = MarkKind.RETAINED
            delta_big = (atom.r, atom.nu)

        marked.append(MarkedAtom(
            atom.t, kind, delta_big, delta_star, atom.r, atom.nu, atom.accepted,
        ))

    return marked


def immigrant_atoms(marked: Sequence[MarkedAtom], t: float) -> List[Tuple[float, float]]:
    """ ``(t_n, delta_n)`` of the immigrants up to *t*. """
    return [
        (m.t, m.delta_star) for m in marked
        if m.kind == MarkKind.IMMIGRANT and m.t <= t
    ]


def retained_atoms(marked: Sequence[MarkedAtom], t: float) -> List[Tuple[float, float]]:
    """ ``(t_n, r_n)`` of the retained real jumps (``nu_n <= Z_{t_n-}``) up to *t*. """
    return [
        (m.t, m.r) for m in marked
        if m.kind == MarkKind.RETAINED and m.accepted and m.t <= t
    ]


def occupation_integral(path: SimPath, t: float) -> float:
    """ ``int_0^t Z_s ds`` by the trapezoid rule on the path grid. """
    times = path.times
    stop = int(np.searchsorted(times, t, side='right'))
    if stop < 1:
        return 0.0

    total = 0.0
    for i in range(stop - 1):
        mid = 0.5 * (path.values[i] + path.left_values[i + 1])
        total += mid * (times[i + 1] - times[i])

    if times[stop - 1] < t:
        total += path.values[stop - 1] * (t - times[stop - 1])

    return float(total)


def girsanov_residual(
    path: SimPath,
    mech: BranchingMechanism,
    t: Optional[float] = None,
) -> GirsanovResidual:
    """ Increments of ``B^up = B - sigma int_0^t Z_s^(-1/2) ds``.

    The integral over each interval uses the trapezoid rule between the value
    at its left knot and the left limit at its right knot.

    Raises:
        DomainError: the path is not strictly positive on ``[0, t]``; the
            message names the first offending epoch.
    """
    t = path.horizon if t is None else t
    times = path.times
    stop = int(np.searchsorted(times, t, side='right'))
    steps = path.brownian_increments[:stop - 1]

    if mech.sigma == 0:
        return GirsanovResidual(times[:stop], np.array(steps, dtype=float))

    for i in range(stop):
        if path.values[i] <= 0 or path.left_values[i] <= 0:
            raise exc.DomainError(
                "path is not strictly positive: "
                f"Z={min(path.values[i], path.left_values[i])} "
                f"at t={times[i]:.6g}"
            )

    h = np.diff(times[:stop])
    drift = 0.5 * h * (path.values[:stop - 1] ** -0.5 + path.left_values[1:stop] ** -0.5)
    return GirsanovResidual(times[:stop], steps - mech.sigma * drift)


def _survival_summary(path: SimPath, functional: PathFunctional) -> Tuple[bool, Any]:
    if path.absorbed:
        return False, None
    return True, functional(path)
