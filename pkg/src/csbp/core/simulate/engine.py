""" The Euler loop shared by the three path kinds. """
import functools
import math
from typing import List, Optional, Tuple

import numpy as np

from csbp.core import exc, log
from csbp.core.mechanism import (
    BranchingMechanism,
    Criticality,
    LevyKind,
    RegularityReport,
    TailWeight,
    check_regularity,
    classify,
)
from csbp.core.rng import PathStreams
from .types import AtomSource, JumpAtom, PathKind, SimConfig, SimPath


def simulate_csbp(
    mech: BranchingMechanism,
    x: float,
    config: SimConfig,
    rng: Optional[PathStreams] = None,
) -> SimPath:
    """ Simulate the CSBP started at *x*, absorbed at 0.

    Raises:
        DomainError: ``x <= 0`` or a non-conservative mechanism.
        ResourceError: more than ``config.max_jumps`` recorded jumps.
        NumericalError: the state became NaN.
    """
    _check_start(x)
    if not _regularity(mech).conservative:
        raise exc.DomainError("the mechanism is not conservative")

    return _Engine(PathKind.CSBP, mech, x, config, rng).run()


def simulate_qprocess(
    mech: BranchingMechanism,
    x: float,
    config: SimConfig,
    rng: Optional[PathStreams] = None,
) -> SimPath:
    """ Simulate the CSBP conditioned on non-extinction.

    The state is clamped at 0 when an Euler step undershoots; the first such
    time is kept in ``absorption_time`` as a discretization diagnostic.

    With a stable measure the branching jumps are cut at
    ``levy.state_cutoff(eps, Z)`` of the state at the step start instead of
    *eps* (see `scaled_cutoff`). The infinite mean immigration drives some
    paths to very large states, where the plain cutoff would need a number of
    jumps growing with the state.

    Raises:
        UnsupportedError: supercritical mechanism.
        DomainError: ``x <= 0`` or extinction is not almost sure.
    """
    _check_start(x)
    if classify(mech) == Criticality.SUPERCRITICAL:
        raise exc.UnsupportedError("the Q-process needs a (sub)critical mechanism")
    if not _regularity(mech).almost_sure_extinction:
        raise exc.DomainError("extinction is not almost sure for this mechanism")

    return _Engine(PathKind.QPROCESS, mech, x, config, rng).run()


def simulate_levy(
    mech: BranchingMechanism,
    x0: float,
    config: SimConfig,
    rng: Optional[PathStreams] = None,
) -> SimPath:
    """ Simulate ``X = x0 + a t + sigma B + jumps`` with Laplace exponent psi. """
    if not math.isfinite(x0):
        raise exc.DomainError(f"x0 must be finite, got {x0}")

    return _Engine(PathKind.LEVY, mech, x0, config, rng).run()


def simulate_path(
    kind: PathKind,
    mech: BranchingMechanism,
    x: float,
    config: SimConfig,
    rng: Optional[PathStreams] = None,
) -> SimPath:
    simulators = {
        PathKind.CSBP: simulate_csbp,
        PathKind.QPROCESS: simulate_qprocess,
        PathKind.LEVY: simulate_levy,
    }
    return simulators[PathKind(kind)](mech, x, config, rng)


def scaled_cutoff(kind: PathKind, mech: BranchingMechanism) -> bool:
    """ True when paths of *kind* cut branching jumps at the state scaled cutoff. """
    return PathKind(kind) == PathKind.QPROCESS and mech.levy.kind == LevyKind.STABLE


@functools.lru_cache(maxsize=32)
def _regularity(mech: BranchingMechanism) -> RegularityReport:
    return check_regularity(mech)


def _check_start(x: float) -> None:
    if not (x > 0 and math.isfinite(x)):
        raise exc.DomainError(f"x must be > 0, got {x}")


class _Engine:
    """ One path. Splits every Euler step at the jump epochs falling inside it.

    Epochs come from unit exponential clocks consumed at the current rate, so
    the rate may change between steps without wasting draws.
    """
    def __init__(
        self,
        kind: PathKind,
        mech: BranchingMechanism,
        x: float,
        config: SimConfig,
        rng: Optional[PathStreams],
    ):
        levy = mech.levy
        eps = config.eps

        self.kind = kind
        self.mech = mech
        self.x = float(x)
        self.config = config
        self.streams = rng or PathStreams.create(config.seed, config.path_index)

        self.sigma = mech.sigma
        self.drift = mech.a - levy.compensator(eps)
        self.jump_rate = 0.0 if levy.is_zero else levy.tail_rate(eps, TailWeight.PLAIN)
        self.scaled = scaled_cutoff(kind, mech)
        self.imm_rate = 0.0
        self.imm_drift = 0.0

        if kind == PathKind.QPROCESS:
            self.imm_drift = mech.sigma ** 2 + levy.small_size_biased_mass(eps)
            if not levy.is_zero:
                self.imm_rate = levy.tail_rate(eps, TailWeight.SIZE_BIASED)

        self.times: List[float] = [0.0]
        self.values: List[float] = [self.x]
        self.left_values: List[float] = [self.x]
        self.increments: List[float] = []
        self.atom_ids: List[int] = [-1]
        self.atoms: List[JumpAtom] = []
        self.absorption_time = math.inf

    def run(self) -> SimPath:
        streams = self.streams
        grid = self.config.step_times().tolist()
        z = self.x
        t = 0.0

        jump_clock = streams.epochs.next() if self.jump_rate > 0 else math.inf
        imm_clock = streams.immigration_epochs.next() if self.imm_rate > 0 else math.inf

        for t_end in grid[1:]:
            bound = 1.0 if self.kind == PathKind.LEVY else max(z, 0.0)
            cut, drift, rate = self.config.eps, self.drift, self.jump_rate * bound
            if self.scaled and bound > 1.0:
                cut, drift, rate = self._scaled_step(bound)

            while True:
                wait_jump = jump_clock / rate if rate > 0 else math.inf
                wait_imm = imm_clock / self.imm_rate if self.imm_rate > 0 else math.inf
                remaining = t_end - t

                if wait_jump <= wait_imm and wait_jump < remaining:
                    h, event = wait_jump, AtomSource.CSBP
                elif wait_imm < wait_jump and wait_imm < remaining:
                    h, event = wait_imm, AtomSource.STAR
                else:
                    h, event = remaining, None

                if rate > 0:
                    jump_clock -= rate * h
                if self.imm_rate > 0:
                    imm_clock -= self.imm_rate * h

                z = self._diffuse(z, h, drift)
                t = t_end if event is None else t + h

                if z <= 0 and self.kind != PathKind.LEVY:
                    z = 0.0
                    if self.absorption_time == math.inf:
                        self.absorption_time = t
                    if self.kind == PathKind.CSBP:
                        self._knot(t, 0.0, 0.0)
                        return self._finish(absorbed_at=t)

                if event is None:
                    self._knot(t, z, z)
                    break

                elif event == AtomSource.STAR:
                    imm_clock = streams.immigration_epochs.next()
                    z = self._immigrate(t, z)

                else:
                    jump_clock = streams.epochs.next()
                    z = self._jump(t, z, bound, cut)

        return self._finish()

    def _scaled_step(self, bound: float) -> Tuple[float, float, float]:
        levy = self.mech.levy
        cut = levy.state_cutoff(self.config.eps, bound)
        drift = self.mech.a - levy.truncation_drift(cut)
        return cut, drift, bound * levy.tail_rate(cut, TailWeight.PLAIN)

    def _diffuse(self, z: float, h: float, drift: float) -> float:
        db = self.streams.brownian.next() * math.sqrt(h)
        self.increments.append(db)

        if self.kind == PathKind.LEVY:
            z_new = z + drift * h + self.sigma * db
        else:
            z_new = (
                z
                + (drift * z + self.imm_drift) * h
                + self.sigma * math.sqrt(max(z, 0.0)) * db
            )

        if not math.isfinite(z_new):
            raise exc.NumericalError(
                f"state became {z_new} near t={self.times[-1] + h:.6g} "
                f"on path {self.config.path_index}"
            )

        return z_new

    def _jump(self, t: float, z: float, bound: float, cut: float) -> float:
        streams = self.streams
        levy = self.mech.levy

        r = levy.inverse_cdf(cut, TailWeight.PLAIN, streams.sizes.next())
        u = streams.marks.next()

        if self.kind == PathKind.LEVY:
            atom = JumpAtom(t, math.nan, r, u, AtomSource.LEVY, z, z + r)
        else:
            nu = streams.nu.next() * bound
            accepted = nu <= z
            z_after = z + r if accepted else z
            atom = JumpAtom(t, nu, r, u, AtomSource.CSBP, z, z_after, accepted)

        if atom.accepted or self.config.record_rejected:
            self._record(atom)
            self._knot(t, atom.z_after, z, len(self.atoms) - 1)
        else:
            self._knot(t, z, z)

        return atom.z_after

    def _immigrate(self, t: float, z: float) -> float:
        r = self.mech.levy.inverse_cdf(
            self.config.eps,
            TailWeight.SIZE_BIASED,
            self.streams.immigration_sizes.next(),
        )
        self._record(JumpAtom(t, math.nan, r, math.nan, AtomSource.STAR, z, z + r))
        self._knot(t, z + r, z, len(self.atoms) - 1)
        return z + r

    def _record(self, atom: JumpAtom) -> None:
        if len(self.atoms) >= self.config.max_jumps:
            raise exc.ResourceError(
                f"more than {self.config.max_jumps} jumps by t={atom.t:.6g} "
                f"on path {self.config.path_index}"
            )
        self.atoms.append(atom)

    def _knot(self, t: float, value: float, left: float, atom_id: int = -1) -> None:
        self.times.append(t)
        self.values.append(value)
        self.left_values.append(left)
        self.atom_ids.append(atom_id)

    def _finish(self, absorbed_at: Optional[float] = None) -> SimPath:
        horizon = self.config.horizon

        if absorbed_at is not None and absorbed_at < horizon:
            self.increments.append(0.0)
            self._knot(horizon, 0.0, 0.0)

        log.dbg(
            "{} path {}: {} knots, {} atoms, absorbed at {}",
            self.kind.value, self.config.path_index, len(self.times),
            len(self.atoms), self.absorption_time,
        )

        return SimPath(
            kind=self.kind,
            x=self.x,
            config=self.config,
            times=np.asarray(self.times),
            values=np.asarray(self.values),
            left_values=np.asarray(self.left_values),
            brownian_increments=np.asarray(self.increments),
            atom_ids=np.asarray(self.atom_ids, dtype=np.int64),
            atoms=self.atoms,
            absorption_time=self.absorption_time,
        )
