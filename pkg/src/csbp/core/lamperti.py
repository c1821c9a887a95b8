"""
.. module:: csbp.core.lamperti
    :synopsis: Lamperti time changes between Levy and CSBP paths.

``Z_t = X_{theta_t ^ T_0}`` with ``theta_t = inf{s: int_0^s du / X_u > t}`` and
back, ``X_s = Z_{phi_s ^ T}`` with ``phi_s = inf{t: int_0^t Z_u du > s}``.
Both clocks interpolate the path linearly between the value at the left knot
and the left limit at the right knot of every interval. ``A`` is then the
trapezoid rule and ``C`` integrates ``1 / X`` of the interpolant exactly.
Infima are taken as first exceedance of the grid clock.
"""
import dataclasses
import functools
import math
from typing import List, Optional, Tuple

import numpy as np

from . import exc
from .mechanism import BranchingMechanism, LevyKind
from .simulate import (
    AtomSource,
    PathKind,
    SimConfig,
    SimPath,
    scaled_cutoff,
    simulate_levy,
)
from .simulate.ensemble import run_ensemble


ABSORPTION_RTOL = 1e-9
MAX_HORIZON_DOUBLINGS = 16


@dataclasses.dataclass
class TimeChange:
    """ Matched grids of a time change, stopped at absorption. """
    source_times: np.ndarray
    target_times: np.ndarray
    clock_integral: np.ndarray
    absorbed_at: Optional[float] = None


@dataclasses.dataclass
class RoundTripReport:
    clock_error: float
    value_error: float
    n_knots: int
    absorbed: bool

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass
class StableDecomposition:
    """ ``Z = x + int Z^(1/alpha) dX + S`` sampled at the knots of a Q-process path.

    ``x_increments[i]`` and ``s_increments[i]`` are the increments over
    ``(times[i-1], times[i]]`` (0 at ``i = 0``), jumps at ``times[i]`` included.
    ``residual[i]`` is ``Z_{t_i} - x - int_0^{t_i} Z^(1/alpha) dX - S_{t_i}``.
    """
    times: np.ndarray
    x_increments: np.ndarray
    s_increments: np.ndarray
    residual: np.ndarray
    theta_atoms: List[Tuple[float, float]]
    star_atoms: List[Tuple[float, float]]

    @property
    def simultaneous_jumps(self) -> int:
        return len({t for t, _ in self.theta_atoms} & {t for t, _ in self.star_atoms})

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual))) if len(self.residual) else 0.0


def levy_clock(xpath: SimPath) -> TimeChange:
    """ ``C(s) = int_0^s du / X_u`` on the knots of *xpath*, up to ``T_0``.

    The path is absorbed at the first knot where it drops below
    ``x0 * 1e-9``. The last interval before the crossing uses the midpoint
    value ``2 / X`` up to the linearly interpolated zero.
    """
    times, values, left = xpath.times, xpath.values, xpath.left_values
    floor = xpath.x * ABSORPTION_RTOL

    if values[0] <= floor:
        return TimeChange(times[:1], np.zeros(1), np.zeros(1), absorbed_at=0.0)

    source = [float(times[0])]
    clock = [0.0]

    for i in range(len(times) - 1):
        h = times[i + 1] - times[i]
        x_i, x_next = values[i], left[i + 1]

        if x_next <= floor:
            frac = x_i / (x_i - x_next) if x_i > x_next else 1.0
            hit = times[i] + frac * h
            clock.append(clock[-1] + frac * h * 2.0 / x_i)
            source.append(float(hit))
            return TimeChange(np.array(source), np.array(clock), np.array(clock), hit)

        clock.append(clock[-1] + inverse_integral(h, x_i, x_next))
        source.append(float(times[i + 1]))

        if values[i + 1] <= floor:
            return TimeChange(
                np.array(source), np.array(clock), np.array(clock), times[i + 1]
            )

    return TimeChange(np.array(source), np.array(clock), np.array(clock))


def inverse_integral(h: float, x0: float, x1: float) -> float:
    """ ``int_0^h ds / x(s)`` for *x* linear from ``x0 > 0`` to ``x1 > 0``. """
    d = (x1 - x0) / x0
    if abs(d) < 1e-8:
        return h / x0 * (1.0 - 0.5 * d)
    return h / x0 * math.log1p(d) / d


def csbp_clock(zpath: SimPath) -> TimeChange:
    """ ``A(t) = int_0^t Z_u du`` on the knots of *zpath*, up to extinction. """
    times, values, left = zpath.times, zpath.values, zpath.left_values
    h = np.diff(times)
    clock = np.concatenate([[0.0], np.cumsum(0.5 * h * (values[:-1] + left[1:]))])

    if not zpath.absorbed:
        return TimeChange(times.copy(), clock, clock)

    stop = int(np.searchsorted(times, zpath.absorption_time, side='left')) + 1
    return TimeChange(
        times[:stop].copy(), clock[:stop], clock[:stop], zpath.absorption_time
    )


def levy_to_csbp(xpath: SimPath, horizon: Optional[float] = None) -> SimPath:
    """ Time change a Levy path into a CSBP path absorbed at ``T_0``.

    Args:
        xpath (SimPath):
            A path from `simulate_levy` started at ``x0 > 0``.
        horizon (float):
            Horizon of the output. An absorbed output is continued at 0 up
            to it; otherwise the output ends where the clock ran out.
    """
    if xpath.kind != PathKind.LEVY:
        raise exc.DomainError(f"expected a levy path, got {xpath.kind.value}")
    if not xpath.x > 0:
        raise exc.DomainError(f"need x0 > 0, got {xpath.x}")

    change = levy_clock(xpath)
    n = len(change.target_times)
    values = xpath.values[:n].copy()
    left = xpath.left_values[:n].copy()
    atom_ids = xpath.atom_ids[:n].copy()
    increments = xpath.brownian_increments[:n - 1].copy()
    target = change.target_times.copy()
    absorption_time = math.inf

    if change.absorbed_at is not None:
        absorption_time = float(target[-1])
        values[-1] = left[-1] = 0.0
        atom_ids[-1] = -1

    out_horizon = float(target[-1])
    if change.absorbed_at is not None and horizon is not None and horizon > out_horizon:
        out_horizon = horizon
        target = np.append(target, out_horizon)
        values = np.append(values, 0.0)
        left = np.append(left, 0.0)
        atom_ids = np.append(atom_ids, -1)
        increments = np.append(increments, 0.0)

    atoms = _retime_atoms(xpath, change)
    return SimPath(
        kind=PathKind.CSBP,
        x=xpath.x,
        config=_with_horizon(xpath.config, out_horizon),
        times=target,
        values=values,
        left_values=left,
        brownian_increments=increments,
        atom_ids=_remap_ids(atom_ids, atoms),
        atoms=list(atoms.values()),
        absorption_time=absorption_time,
    )


def csbp_to_levy(zpath: SimPath) -> SimPath:
    """ Time change a CSBP path into a Levy path stopped when the clock is exhausted. """
    if zpath.kind == PathKind.LEVY:
        raise exc.DomainError("expected a csbp path, got a levy path")

    change = csbp_clock(zpath)
    n = len(change.target_times)
    atoms = _retime_atoms(zpath, change)

    return SimPath(
        kind=PathKind.LEVY,
        x=zpath.x,
        config=_with_horizon(zpath.config, float(change.target_times[-1])),
        times=change.target_times.copy(),
        values=zpath.values[:n].copy(),
        left_values=zpath.left_values[:n].copy(),
        brownian_increments=zpath.brownian_increments[:n - 1].copy(),
        atom_ids=_remap_ids(zpath.atom_ids[:n], atoms),
        atoms=list(atoms.values()),
        absorption_time=math.inf,
    )


def round_trip(xpath: SimPath) -> RoundTripReport:
    """ Compare ``csbp_to_levy(levy_to_csbp(X))`` with ``X`` on ``[0, T_0]``.

    ``clock_error`` is the sup over knots of ``|A(C(s_i)) - s_i|``.
    ``value_error`` reads the round trip path at the original knots and
    compares with ``X``, skipping knots whose distorted time crosses a jump.
    """
    zpath = levy_to_csbp(xpath)
    back = csbp_to_levy(zpath)
    n = min(len(back.times), len(zpath.times))
    source = levy_clock(xpath).source_times[:n]
    mapped = back.times[:n]
    jump_times = xpath.times[xpath.atom_ids >= 0]

    clock_error = float(np.max(np.abs(mapped - source)))
    value_error = 0.0
    for s, s_mapped, expected in zip(source, mapped, back.values[:n]):
        lo, hi = min(s, s_mapped), max(s, s_mapped)
        if s > back.horizon or np.any((jump_times > lo) & (jump_times <= hi)):
            continue
        value_error = max(value_error, abs(back.value_at(s) - expected))

    return RoundTripReport(clock_error, value_error, n, zpath.absorbed)


def coarsen(path: SimPath, factor: int) -> SimPath:
    """ *path* seen on the Euler grid of step ``factor * dt``.

    Knots between the coarse grid points are dropped except jump epochs and
    the absorption time, so the atoms are untouched. The Brownian increments
    of merged intervals are summed.
    """
    if factor < 1:
        raise exc.DomainError(f"factor must be >= 1, got {factor}")

    fine = path.config.step_times()
    grid = np.append(fine[::factor], fine[-1])
    keep = np.isin(path.times, grid) | (path.atom_ids >= 0)
    keep |= path.times == path.absorption_time
    keep[0] = True
    idx = np.flatnonzero(keep)

    driven = np.concatenate([[0.0], np.cumsum(path.brownian_increments)])
    config = dataclasses.replace(
        path.config, dt=min(factor * path.config.dt, path.config.horizon)
    )
    return dataclasses.replace(
        path,
        config=config,
        times=path.times[idx],
        values=path.values[idx],
        left_values=path.left_values[idx],
        brownian_increments=np.diff(driven[idx]),
        atom_ids=path.atom_ids[idx],
    )


def time_changed_value(xpath: SimPath, mech: BranchingMechanism, t: float) -> float:
    """ ``Z_t`` of the time changed Levy path.

    When the clock of *xpath* runs out before *t* the Levy path is simulated
    again with a doubled horizon. Its draws extend those of the shorter path,
    so the longer path has the shorter one as a prefix.
    """
    path = xpath
    for _ in range(MAX_HORIZON_DOUBLINGS):
        change = levy_clock(path)
        if change.absorbed_at is not None or change.target_times[-1] >= t:
            return levy_to_csbp(path, horizon=max(t, path.config.dt)).value_at(t)

        config = dataclasses.replace(path.config, horizon=2.0 * path.config.horizon)
        path = simulate_levy(mech, path.x, config)

    raise exc.NumericalError(
        f"Lamperti clock of path {xpath.config.path_index} did not reach t={t}"
    )


def lamperti_ensemble(
    mech: BranchingMechanism,
    x: float,
    config: SimConfig,
    n_paths: int,
    t: float,
    threads: Optional[int] = None,
) -> np.ndarray:
    """ ``Z_t`` for *n_paths* time changed Levy paths. """
    values = run_ensemble(
        PathKind.LEVY, mech, x, config, n_paths,
        summarize=functools.partial(time_changed_value, mech=mech, t=t),
        threads=threads,
    )
    return np.asarray(values, dtype=float)


def stable_theta_atoms(
    qpath: SimPath,
    mech: BranchingMechanism,
) -> List[Tuple[float, float]]:
    """ ``(t_n, r_n / Z_{t_n-}^(1/alpha))`` for accepted branching jumps.

    Thinned candidates and immigration atoms are dropped.

    Raises:
        DomainError: the mechanism is not stable.
    """
    alpha = _stable_alpha(mech)
    return [
        (atom.t, atom.r / atom.z_before ** (1.0 / alpha))
        for atom in qpath.atoms
        if atom.source == AtomSource.CSBP and atom.accepted and atom.z_before > 0
    ]


def stable_decompose(qpath: SimPath, mech: BranchingMechanism) -> StableDecomposition:
    """ Split a stable Q-process path into ``int Z^(1/alpha) dX`` and ``S``.

    ``X`` is rebuilt from the theta atoms with the drift of its own small jump
    compensation: a branching jump ``r >= cut`` is a theta jump above
    ``cut / Z^(1/alpha)``, with ``cut`` the cutoff the engine used in that
    Euler step. ``S`` collects the immigration atoms and the small
    immigration drift. With ``psi = c lam^alpha`` the residual vanishes up to
    rounding until the first clamp at 0.

    Raises:
        DomainError: the mechanism is not ``c lam^alpha``.
    """
    alpha = _stable_alpha(mech)
    levy = mech.levy
    k = levy.k
    if mech.sigma != 0 or abs(mech.a + k / (alpha - 1.0)) > 1e-12 * max(1.0, abs(mech.a)):
        raise exc.DomainError("the decomposition needs psi(lam) = c lam^alpha")

    eps = qpath.config.eps
    small_mass = levy.small_size_biased_mass(eps)
    times, values, left = qpath.times, qpath.values, qpath.left_values
    n = len(times)
    cutoffs = _branching_cutoffs(qpath, mech)

    dx = np.zeros(n)
    ds = np.zeros(n)
    residual = np.zeros(n)
    theta_atoms: List[Tuple[float, float]] = []
    star_atoms: List[Tuple[float, float]] = []
    integral = 0.0
    s_total = 0.0

    for i in range(1, n):
        h = times[i] - times[i - 1]
        z = values[i - 1]

        if z > 0:
            root = z ** (1.0 / alpha)
            cut = cutoffs[i] / root
            dx[i] = mech.a * h - h * k * (cut ** (1.0 - alpha) - 1.0) / (alpha - 1.0)
            integral += root * dx[i]
        ds[i] = small_mass * h

        atom_id = qpath.atom_ids[i]
        if atom_id >= 0:
            atom = qpath.atoms[atom_id]
            if atom.source == AtomSource.STAR:
                ds[i] += atom.r
                star_atoms.append((atom.t, atom.r))
            elif atom.accepted and atom.z_before > 0:
                root = atom.z_before ** (1.0 / alpha)
                theta = atom.r / root
                dx[i] += theta
                integral += root * theta
                theta_atoms.append((atom.t, theta))

        s_total += ds[i]
        residual[i] = values[i] - qpath.x - integral - s_total

    return StableDecomposition(times.copy(), dx, ds, residual, theta_atoms, star_atoms)


def _branching_cutoffs(path: SimPath, mech: BranchingMechanism) -> np.ndarray:
    """ Branching cutoff in force over ``(times[i-1], times[i]]``, stored at ``i``.

    Follows the engine: the cutoff is set by the state at the start of the
    enclosing Euler step.
    """
    eps = path.config.eps
    cutoffs = np.full(len(path.times), eps)
    if len(path.times) < 2 or not scaled_cutoff(path.kind, mech):
        return cutoffs

    grid = path.config.step_times()
    starts = np.searchsorted(path.times, grid, side='right') - 1
    steps = np.searchsorted(grid, path.times[:-1], side='right') - 1
    steps = np.clip(steps, 0, len(grid) - 2)
    bounds = np.maximum(path.values[starts[steps]], 0.0)
    cutoffs[1:] = [mech.levy.state_cutoff(eps, float(b)) for b in bounds]
    return cutoffs


def _stable_alpha(mech: BranchingMechanism) -> float:
    if mech.levy.kind != LevyKind.STABLE:
        raise exc.DomainError(f"needs a stable mechanism, got {mech.levy.kind.value}")
    return mech.levy.alpha


def _with_horizon(config: SimConfig, horizon: float) -> SimConfig:
    horizon = max(horizon, 1e-12)
    return dataclasses.replace(config, horizon=horizon, dt=min(config.dt, horizon))


def _retime_atoms(path: SimPath, change: TimeChange):
    """ Atoms kept by the time change, keyed by old index, moved to the new clock. """
    out = {}
    n = len(change.target_times)
    for knot in np.flatnonzero(path.atom_ids[:n] >= 0):
        if change.absorbed_at is not None and knot == n - 1:
            continue
        atom = path.atoms[path.atom_ids[knot]]
        out[int(path.atom_ids[knot])] = dataclasses.replace(
            atom, t=float(change.target_times[knot])
        )
    return out


def _remap_ids(atom_ids: np.ndarray, atoms: dict) -> np.ndarray:
    new_index = {old: new for new, old in enumerate(atoms)}
    return np.array([new_index.get(int(i), -1) for i in atom_ids], dtype=np.int64)
