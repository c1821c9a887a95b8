"""
.. module:: csbp.core.verify
    :synopsis: Verification suites: every oracle against its Monte Carlo estimate.

A suite is a function ``(config, threads) -> List[CheckReport]``. Each uses
the mechanism from the run config when it is meaningful for the suite and a
fixed benchmark mechanism otherwise. All randomness derives from
``config.sim.seed``, so rerunning a suite reproduces its reports bit for bit.

=========== ==========================================================
suite       checks
=========== ==========================================================
laplace     ODE against closed forms, semigroup, transform examples
martingale  ``E exp(rho t) Z_t = x`` and ``E exp(-theta Z_t)``
qprocess    direct, weighted and survival conditioned estimators agree
marking     immigrant and retained jump intensities, Poisson boxes
girsanov    weighted mean and variance of the corrected Brownian motion
lamperti    time changed Levy paths against the CSBP transform
stable      theta atoms, subordinator part, decomposition residual
=========== ==========================================================
"""
import dataclasses
import functools
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exc, laplace, log
from .conditioning import (
    MarkKind,
    MIN_ACCEPTED,
    SurvivalEstimate,
    best_rung,
    girsanov_residual,
    hweight,
    immigrant_atoms,
    mark_jumps,
    occupation_integral,
    retained_atoms,
    survival_ladder,
)
from .conf import RunConfig
from .lamperti import (
    coarsen,
    csbp_clock,
    lamperti_ensemble,
    levy_clock,
    round_trip,
    stable_decompose,
)
from .mechanism import (
    BranchingMechanism,
    LevyKind,
    LevyMeasure,
    TailWeight,
    check_regularity,
    phi_eval,
)
from .simulate import AtomSource, PathKind, SimConfig, SimPath, simulate_levy
from .simulate.ensemble import run_ensemble
from .stats import (
    Box,
    CheckReport,
    campbell_check,
    check_estimate,
    martingale_check,
    poisson_box_test,
    weighted_mean_ci,
)


Suite = Callable[[RunConfig, Optional[int]], List[CheckReport]]
ODE_RTOL = 1e-8
MAX_ABSORBED_FRACTION = 0.01
MIN_CLOCK_ORDER = 0.8
CLOCK_ERROR_FLOOR = 1e-12
ROUND_TRIP_REFINEMENTS = (1, 2, 4)
SIZE_BOXES = (
    Box(0.0, 0.5, 1.0, 2.0),
    Box(0.5, 1.0, 1.0, 2.0),
    Box(0.0, 0.5, 2.0),
    Box(0.5, 1.0, 2.0),
)


@dataclasses.dataclass
class VerifyResult:
    suite: str
    reports: List[CheckReport]
    stamp: Dict[str, Any]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'pass': self.passed,
            'checks': [r.to_dict() for r in self.reports],
            **self.stamp,
        }


def feller_benchmark() -> BranchingMechanism:
    return BranchingMechanism.feller(a=-1.0, sigma=math.sqrt(2.0))


def quadratic_benchmark() -> BranchingMechanism:
    return BranchingMechanism.feller(a=0.0, sigma=math.sqrt(2.0))


def marking_benchmark() -> BranchingMechanism:
    """ ``Pi(dr) = r^-2.5 dr`` with the drift making it critical. """
    return BranchingMechanism(a=-2.0, sigma=0.0, levy=LevyMeasure.stable(1.0, 1.5))


def run_verify(
    suite: str,
    config: RunConfig,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> VerifyResult:
    """ Run one suite, or all of them for ``suite == 'all'``. """
    if seed is not None:
        sim = dataclasses.replace(config.sim, seed=seed)
        config = dataclasses.replace(config, sim=sim)

    names = list(SUITES) if suite == 'all' else [suite]
    reports: List[CheckReport] = []

    for name in names:
        if name not in SUITES:
            raise exc.DomainError(
                f"unknown suite '{name}', pick one of {', '.join(SUITES)}"
            )

        log.info("Running <35>{}<32> suite", name)
        suite_reports = SUITES[name](config, threads)
        for report in suite_reports:
            report.seed = config.sim.seed
            log.detail(
                "{} {}: estimate={:.6g} target={:.6g}",
                '<32>PASS<0>' if report.passed else '<31>FAIL<0>',
                report.name, report.estimate, report.target,
            )
        reports.extend(suite_reports)

    return VerifyResult(suite, reports, config.stamp())


def laplace_suite(config: RunConfig, threads: Optional[int] = None) -> List[CheckReport]:
    thetas = (0.1, 1.0, 10.0)
    times = np.linspace(0.0, 10.0, 21)
    reports = []

    families = [
        ('ode_vs_closed_form[quadratic]', quadratic_benchmark(), {'family': 'quadratic'}),
        ('ode_vs_closed_form[stable1.5]', BranchingMechanism.stable(1.5),
         {'family': 'stable', 'alpha': 1.5}),
    ]
    for name, mech, kwargs in families:
        worst = 0.0
        for theta in thetas:
            curve = laplace.solve_u(mech, theta, times)
            for t, u in zip(times, curve.values):
                exact = laplace.closed_form_u(theta=theta, t=t, **kwargs)
                worst = max(worst, abs(u - exact) / exact)
        reports.append(tolerance_report(name, worst, 0.0, ODE_RTOL))

    mech = config.mechanism or quadratic_benchmark()
    worst = 0.0
    for t in np.linspace(0.2, 2.0, 5):
        for s in np.linspace(0.2, 2.0, 5):
            for theta in thetas:
                u_s = laplace.solve_u(mech, theta, [0.0, s]).values[-1]
                lhs = laplace.solve_u(mech, theta, [0.0, t + s]).values[-1]
                rhs = laplace.solve_u(mech, u_s, [0.0, t]).values[-1]
                worst = max(worst, abs(lhs - rhs) / lhs)
    reports.append(tolerance_report('semigroup', worst, 0.0, ODE_RTOL))

    quad = quadratic_benchmark()
    reports.append(tolerance_report(
        'qprocess_laplace[quadratic]',
        laplace.qprocess_laplace(quad, 1.0, 1.0, 1.0),
        math.exp(-0.5) / 4.0,
        1e-8,
    ))
    reports.append(tolerance_report(
        'survival_probability[quadratic]',
        laplace.survival_probability(quad, 1.0, 1.0),
        -math.expm1(-1.0),
        1e-6,
    ))
    if not check_regularity(mech).almost_sure_extinction:
        mech = quad
    exact = laplace.extinction_u_from_integral(mech, 1.0)
    reports.append(tolerance_report(
        'extinction_u[ladder_vs_integral]',
        laplace.extinction_u(mech, 1.0).value,
        exact,
        1e-5 * exact,
    ))
    return reports


def martingale_suite(
    config: RunConfig,
    threads: Optional[int] = None,
) -> List[CheckReport]:
    mech = config.mechanism or feller_benchmark()
    x = config.x
    t = config.sim.horizon
    grid = [0.0, 0.5 * t, t]
    theta = config.condition.theta

    values = np.array(run_ensemble(
        PathKind.CSBP, mech, x, config.sim, config.paths,
        summarize=functools.partial(sample_values, times=grid),
        threads=threads,
    ))

    laplace_est = weighted_mean_ci(
        np.exp(-theta * values[:, -1]), multiplier=config.multiplier
    )
    reports = [check_estimate(
        f"csbp_laplace[theta={theta:g},t={t:g}]",
        laplace_est,
        laplace.csbp_laplace(mech, x, theta, t),
    )]
    reports += martingale_check(values, mech, grid, x=x, multiplier=config.multiplier)
    return reports


def qprocess_suite(config: RunConfig, threads: Optional[int] = None) -> List[CheckReport]:
    mech = config.mechanism or feller_benchmark()
    x, t, theta = config.x, config.condition.t, config.condition.theta
    mult = config.multiplier
    sim = dataclasses.replace(config.sim, horizon=t)
    target = laplace.qprocess_laplace(mech, x, theta, t)
    reports = []

    direct = np.array(run_ensemble(
        PathKind.QPROCESS, mech, x, sim, config.paths,
        summarize=functools.partial(final_and_absorbed),
        threads=threads,
    ))
    direct_est = weighted_mean_ci(np.exp(-theta * direct[:, 0]), multiplier=mult)
    absorbed = float(np.mean(np.isfinite(direct[:, 1])))
    reports.append(check_estimate(
        'qprocess_direct_laplace',
        direct_est,
        target,
        artifact_absorbed_fraction=absorbed,
    ))
    reports.append(tolerance_report(
        'qprocess_absorbed_fraction', absorbed, 0.0, MAX_ABSORBED_FRACTION,
    ))

    mean_target = laplace.qprocess_mean(mech, x, t)
    if math.isfinite(mean_target):
        reports.append(check_estimate(
            'qprocess_direct_mean',
            weighted_mean_ci(direct[:, 0], multiplier=mult),
            mean_target,
        ))

    weighted = np.array(run_ensemble(
        PathKind.CSBP, mech, x, _reseeded(sim, 1), config.paths,
        summarize=functools.partial(
            weighted_laplace_sample, mech=mech, t=t, theta=theta,
        ),
        threads=threads,
    ))
    weighted_est = weighted_mean_ci(weighted[:, 0], weighted[:, 1], multiplier=mult)
    reports.append(check_estimate('qprocess_importance_laplace', weighted_est, target))

    ladder = survival_ladder(
        mech, x, t,
        functools.partial(laplace_functional, theta=theta, t=t),
        config.paths,
        _reseeded(sim, 2),
        ladder=config.condition.s or None,
        threads=threads,
        multiplier=mult,
    )
    table = [row.to_dict() for row in ladder]
    rung = best_rung(ladder)
    reports.append(ladder_convergence_report(ladder, target, mult))

    if rung is None or rung.estimate is None:
        reports.append(CheckReport(
            'qprocess_survival_laplace', math.nan, math.nan, target, math.nan,
            False, config.paths, details={'ladder': table},
        ))
    else:
        reports.append(check_estimate(
            'qprocess_survival_laplace', rung.estimate, target, s=rung.s, ladder=table,
        ))
        estimates = {
            'direct': direct_est,
            'importance': weighted_est,
            'survival': rung.estimate,
        }
        reports += agreement_reports(estimates, mult)

    return reports


def marking_suite(config: RunConfig, threads: Optional[int] = None) -> List[CheckReport]:
    mech = config.mechanism
    if mech is None or mech.levy.is_zero:
        mech = marking_benchmark()

    reports, _ = marking_checks(mech, config, threads)
    return reports


def marking_checks(
    mech: BranchingMechanism,
    config: RunConfig,
    threads: Optional[int] = None,
) -> Tuple[List[CheckReport], List[Dict[str, Any]]]:
    """ Campbell and Poisson box checks of the marked jumps under ``D_t``.

    Returns the reports and the per path summaries, which carry the marked
    atoms for the CSV output of the ``condition`` command.
    """
    if mech.levy.is_zero:
        raise exc.DomainError("marking needs a mechanism with jumps")

    t = config.sim.horizon
    levy = mech.levy
    mult = config.multiplier
    summaries = run_ensemble(
        PathKind.CSBP, mech, config.x, config.sim, config.paths,
        summarize=functools.partial(marking_summary, mech=mech, t=t),
        threads=threads,
    )
    weights = np.array([s['weight'] for s in summaries])
    big = functools.partial(_indicator, threshold=1.0)
    boxes = _scaled_boxes(t)
    reports = []

    reports.append(campbell_check(
        [[r for _, r in s['immigrants']] for s in summaries],
        big,
        t * levy.tail_rate(1.0, TailWeight.SIZE_BIASED),
        weights=weights,
        multiplier=mult,
        name='campbell_immigrants[r>=1]',
    ))
    reports.append(campbell_check(
        [[r for _, r in s['retained']] for s in summaries],
        big,
        [levy.tail_rate(1.0, TailWeight.PLAIN) * s['occupation'] for s in summaries],
        weights=weights,
        multiplier=mult,
        name='campbell_retained[r>=1]',
    ))
    reports.append(poisson_box_test(
        [s['immigrants'] for s in summaries],
        boxes,
        [_box_mass(levy, box, TailWeight.SIZE_BIASED) for box in boxes],
        weights=weights,
        name='poisson_boxes_immigrants',
    ))

    broken = sum(1 for s in summaries if not s['partition_ok'])
    reports.append(tolerance_report('marking_partition', float(broken), 0.0, 0.0))
    return reports, summaries


def girsanov_suite(config: RunConfig, threads: Optional[int] = None) -> List[CheckReport]:
    mech = config.mechanism or feller_benchmark()
    if mech.sigma == 0:
        raise exc.DomainError("the girsanov suite needs sigma > 0")

    t = config.sim.horizon
    samples = np.array(run_ensemble(
        PathKind.CSBP, mech, config.x, config.sim, config.paths,
        summarize=functools.partial(girsanov_sample, mech=mech, t=t),
        threads=threads,
    ))
    values, weights = samples[:, 0], samples[:, 1]
    mult = config.multiplier

    return [
        check_estimate(
            'girsanov_mean', weighted_mean_ci(values, weights, mult), 0.0,
        ),
        check_estimate(
            'girsanov_variance', weighted_mean_ci(values ** 2, weights, mult), t,
        ),
    ]


def lamperti_suite(config: RunConfig, threads: Optional[int] = None) -> List[CheckReport]:
    mechs = [
        ('feller', feller_benchmark()),
        ('stable1.5', BranchingMechanism.stable(1.5)),
    ]
    if config.mechanism is not None:
        mechs = [('config', config.mechanism)]

    reports = [
        lamperti_laplace_check(name, mech, config, threads)
        for name, mech in mechs
    ]
    reports.append(occupation_clock_check(mechs[0][1], config, threads))
    reports.append(round_trip_check(mechs[0][1], config))
    return reports


def lamperti_laplace_check(
    name: str,
    mech: BranchingMechanism,
    config: RunConfig,
    threads: Optional[int] = None,
) -> CheckReport:
    """ ``E exp(-theta Z_t)`` of time changed Levy paths against the CSBP transform. """
    t, theta = config.lamperti.t, config.lamperti.theta
    values = lamperti_ensemble(mech, config.x, config.sim, config.paths, t, threads)
    return check_estimate(
        f"lamperti_laplace[{name}]",
        weighted_mean_ci(np.exp(-theta * values), multiplier=config.multiplier),
        laplace.csbp_laplace(mech, config.x, theta, t),
    )


def occupation_clock_check(
    mech: BranchingMechanism,
    config: RunConfig,
    threads: Optional[int] = None,
) -> CheckReport:
    """ Mean of the reverse clock ``A(t) = int_0^t Z ds``.

    The target is ``int_0^t x exp(-rho s) ds``.
    """
    t = config.sim.horizon
    clocks = np.array(run_ensemble(
        PathKind.CSBP, mech, config.x, config.sim, config.paths,
        summarize=functools.partial(clock_total),
        threads=threads,
    ))
    rho = mech.rho
    target = config.x * t if abs(rho) < 1e-12 else -config.x * math.expm1(-rho * t) / rho
    return check_estimate(
        'occupation_clock',
        weighted_mean_ci(clocks, multiplier=config.multiplier),
        target,
    )


def round_trip_check(
    mech: BranchingMechanism,
    config: RunConfig,
    n_paths: int = 50,
) -> CheckReport:
    """ Convergence order of the round trip clock error.

    Every Levy path is simulated at the finest step and read again on the
    coarser grids with `coarsen`, so all steps share one realization. The
    order is fitted to the median clock error over the paths.
    """
    n_paths = min(config.paths, n_paths)
    finest = max(ROUND_TRIP_REFINEMENTS)
    sim = dataclasses.replace(config.sim, dt=config.sim.dt / finest)
    clock_errors = np.zeros((n_paths, len(ROUND_TRIP_REFINEMENTS)))
    value_errors = np.zeros_like(clock_errors)

    for i in range(n_paths):
        xpath = simulate_levy(mech, config.x, sim.for_path(i))
        for j, refinement in enumerate(ROUND_TRIP_REFINEMENTS):
            trip = round_trip(coarsen(xpath, finest // refinement))
            clock_errors[i, j] = trip.clock_error
            value_errors[i, j] = trip.value_error

    steps = [config.sim.dt / refinement for refinement in ROUND_TRIP_REFINEMENTS]
    return round_trip_report(
        steps,
        np.median(clock_errors, axis=0),
        n_paths,
        value_error=np.max(value_errors, axis=0).tolist(),
    )


def round_trip_report(
    steps: Sequence[float],
    clock_errors: Sequence[float],
    n: int,
    **details: Any,
) -> CheckReport:
    """ Passes when the clock error shrinks at least like ``dt^MIN_CLOCK_ORDER``.

    The order is the least squares slope of ``log error`` against ``log dt``.
    Errors that all vanish up to rounding pass with an infinite order.
    """
    errors = np.asarray(clock_errors, dtype=float)
    if len(errors) != len(steps) or len(errors) < 2:
        raise exc.DomainError("need one clock error per step and at least 2 steps")

    if np.all(errors <= CLOCK_ERROR_FLOOR):
        order = math.inf
    else:
        logs = np.log(np.maximum(errors, CLOCK_ERROR_FLOOR))
        order = float(np.polyfit(np.log(np.asarray(steps, dtype=float)), logs, 1)[0])

    return CheckReport(
        'lamperti_round_trip', order, math.nan, 1.0, 1.0 - MIN_CLOCK_ORDER,
        order >= MIN_CLOCK_ORDER, n,
        details={'dt': list(steps), 'clock_error': errors.tolist(), **details},
    )


def stable_suite(config: RunConfig, threads: Optional[int] = None) -> List[CheckReport]:
    mech = config.mechanism
    if mech is None or mech.levy.kind != LevyKind.STABLE:
        mech = BranchingMechanism.stable(1.5)

    t = config.sim.horizon
    levy = mech.levy
    mult = config.multiplier
    summaries = run_ensemble(
        PathKind.QPROCESS, mech, config.x, config.sim, config.paths,
        summarize=functools.partial(stable_summary, mech=mech),
        threads=threads,
    )

    reports = [
        campbell_check(
            [[th for _, th in s['theta']] for s in summaries],
            functools.partial(_indicator, threshold=1.0),
            t * levy.tail_rate(1.0, TailWeight.PLAIN),
            multiplier=mult,
            name='theta_rate[theta>=1]',
        ),
        poisson_box_test(
            [s['theta'] for s in summaries],
            _scaled_boxes(t),
            [_box_mass(levy, box, TailWeight.PLAIN) for box in _scaled_boxes(t)],
            name='poisson_boxes_theta',
        ),
        check_estimate(
            'subordinator_laplace[lambda=1]',
            weighted_mean_ci(
                np.exp(-np.array([s['s_total'] for s in summaries])), None, mult
            ),
            math.exp(-t * phi_eval(mech, 1.0)),
        ),
        tolerance_report(
            'simultaneous_jumps',
            float(sum(s['simultaneous'] for s in summaries)),
            0.0,
            0.0,
        ),
    ]

    clean = [s['residual'] for s in summaries if not s['clamped']]
    worst = max(clean) if clean else 0.0
    reports.append(tolerance_report('decomposition_residual', worst, 0.0, 1e-8))
    return reports


SUITES: Dict[str, Suite] = {
    'laplace': laplace_suite,
    'martingale': martingale_suite,
    'qprocess': qprocess_suite,
    'marking': marking_suite,
    'girsanov': girsanov_suite,
    'lamperti': lamperti_suite,
    'stable': stable_suite,
}


def ladder_convergence_report(
    rows: Sequence[SurvivalEstimate],
    target: float,
    multiplier: float,
) -> CheckReport:
    """ The distance to *target* must not grow along the usable rungs.

    Two consecutive rungs may move away from the target by the combined
    band of their estimates. Fewer than two usable rungs pass.
    """
    usable = sorted(
        (row for row in rows if row.estimate and row.accepted >= MIN_ACCEPTED),
        key=lambda row: row.s,
    )
    gaps = [abs(row.estimate.mean - target) for row in usable]
    stderrs = [row.estimate.stderr for row in usable]
    growth = [
        (gaps[i + 1] - gaps[i], multiplier * math.hypot(stderrs[i], stderrs[i + 1]))
        for i in range(len(usable) - 1)
    ]
    worst, band = max(growth, key=lambda gb: gb[0] - gb[1], default=(0.0, 0.0))

    return CheckReport(
        name='qprocess_survival_convergence',
        estimate=worst,
        stderr=math.nan,
        target=0.0,
        band=band,
        passed=all(g <= b for g, b in growth),
        n=len(usable),
        details={'s': [row.s for row in usable], 'distance': gaps},
    )


def tolerance_report(name: str, value: float, target: float, tol: float) -> CheckReport:
    """ Deterministic check ``|value - target| <= tol``. """
    return CheckReport(
        name=name,
        estimate=value,
        stderr=0.0,
        target=target,
        band=tol,
        passed=abs(value - target) <= tol,
        n=1,
    )


def agreement_reports(estimates: Dict[str, Any], multiplier: float) -> List[CheckReport]:
    """ Pairwise agreement within the combined band of two independent estimates. """
    names = sorted(estimates)
    out = []
    for i, first in enumerate(names):
        for second in names[i + 1:]:
            a, b = estimates[first], estimates[second]
            se = math.hypot(a.stderr, b.stderr)
            diff = a.mean - b.mean
            out.append(CheckReport(
                name=f"agreement[{first},{second}]",
                estimate=diff,
                stderr=se,
                target=0.0,
                band=multiplier * se,
                passed=abs(diff) <= multiplier * se,
                n=min(a.n, b.n),
            ))
    return out


def sample_values(path: SimPath, times: Sequence[float]) -> List[float]:
    return [path.value_at(t) for t in times]


def final_and_absorbed(path: SimPath) -> Tuple[float, float]:
    return path.final_value, path.absorption_time


def laplace_functional(path: SimPath, theta: float, t: float) -> float:
    return math.exp(-theta * path.value_at(t))


def weighted_laplace_sample(
    path: SimPath,
    mech: BranchingMechanism,
    t: float,
    theta: float,
) -> Tuple[float, float]:
    return laplace_functional(path, theta, t), hweight(path, mech, t)


def clock_total(path: SimPath) -> float:
    return occupation_integral(path, path.horizon)


def girsanov_sample(
    path: SimPath,
    mech: BranchingMechanism,
    t: float,
) -> Tuple[float, float]:
    weight = hweight(path, mech, t)
    if weight == 0:
        return 0.0, 0.0
    return girsanov_residual(path, mech, t).total, weight


def marking_summary(path: SimPath, mech: BranchingMechanism, t: float) -> Dict[str, Any]:
    marked = [m for m in mark_jumps(path) if m.accepted and m.t <= t]
    branching = sorted(a.r for a in path.atoms_from(AtomSource.CSBP) if a.t <= t)
    split = sorted(
        [m.delta_star for m in marked if m.kind == MarkKind.IMMIGRANT]
        + [m.delta_big[0] for m in marked if m.kind == MarkKind.RETAINED]
    )

    return {
        'marked': marked,
        'weight': hweight(path, mech, t),
        'immigrants': immigrant_atoms(marked, t),
        'retained': retained_atoms(marked, t),
        'occupation': occupation_integral(path, t),
        'partition_ok': split == branching,
    }


def stable_summary(path: SimPath, mech: BranchingMechanism) -> Dict[str, Any]:
    parts = stable_decompose(path, mech)
    return {
        'theta': parts.theta_atoms,
        's_total': float(np.sum(parts.s_increments)),
        'simultaneous': parts.simultaneous_jumps,
        'residual': parts.max_residual / max(1.0, float(np.max(path.values))),
        'clamped': path.absorbed,
    }


def _indicator(r: np.ndarray, threshold: float) -> np.ndarray:
    return (r >= threshold).astype(float)


def _scaled_boxes(t: float) -> List[Box]:
    return [dataclasses.replace(b, t0=b.t0 * t, t1=b.t1 * t) for b in SIZE_BOXES]


def _box_mass(levy: LevyMeasure, box: Box, weight: TailWeight) -> float:
    return (box.t1 - box.t0) * levy.interval_rate(box.r0, box.r1, weight)


def _reseeded(sim: SimConfig, offset: int) -> SimConfig:
    return dataclasses.replace(sim, seed=sim.seed + offset)


def lamperti_pairs(path: SimPath) -> List[Tuple[float, float, float]]:
    """ ``(source_time, target_time, value)`` rows of the time change of *path*.

    Levy paths go through `levy_clock`, CSBP paths through `csbp_clock`.
    """
    change = levy_clock(path) if path.kind == PathKind.LEVY else csbp_clock(path)
    values = path.values[:len(change.source_times)].copy()
    if change.absorbed_at is not None:
        values[-1] = 0.0

    return [
        (float(s), float(tt), float(v))
        for s, tt, v in zip(change.source_times, change.target_times, values)
    ]
