# Copyright 2024 The csbp-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
""" Ensemble commands implementation. """
import dataclasses
import functools
import math
from typing import Any, List, Optional, Sequence

import numpy as np

from csbp.core import conf, context, exc, log, report, util
from csbp.core import verify as checks
from csbp.core.conditioning import best_rung, survival_ladder
from csbp.core.conf import RunConfig
from csbp.core.laplace import csbp_mean, qprocess_laplace, qprocess_mean
from csbp.core.simulate import (
    PathKind,
    pathio,
    run_ensemble,
    simulate_csbp,
    simulate_levy,
)
from csbp.core.stats import (
    CheckReport,
    check_estimate,
    effective_sample_size,
    weighted_mean_ci,
)


MARKED_COLUMNS = ('path', 't', 'kind', 'r', 'nu', 'delta_star', 'accepted', 'weight')
LAMPERTI_COLUMNS = ('source_time', 'target_time', 'value')


def simulate(
    mech: Optional[str],
    x: Optional[float],
    paths: Optional[int],
    dt: Optional[float],
    eps: Optional[float],
    horizon: Optional[float],
    seed: Optional[int],
    qprocess: bool,
    levy: bool,
    fmt: Optional[str],
    out: Optional[str],
) -> None:
    """ Simulate an ensemble, dump the paths and write a summary report. """
    if qprocess and levy:
        raise exc.DomainError("--qprocess and --levy can't be used together")

    config = conf.from_context(mech, {
        'x': x,
        'paths': paths,
        'sim.dt': dt,
        'sim.eps': eps,
        'sim.horizon': horizon,
        'sim.seed': seed,
        'output.format': fmt,
    })
    mechanism = config.require_mechanism()
    kind = PathKind.QPROCESS if qprocess else PathKind.LEVY if levy else PathKind.CSBP

    log.info("Simulating <35>{}<32> {} paths", config.paths, kind.value)
    with util.timed_block() as t:
        ensemble = run_ensemble(
            kind, mechanism, config.x, config.sim, config.paths,
            threads=context.get('threads', None),
        )
    log.info("Done in <35>{}s", t.elapsed_s)

    binary = config.output.format == 'binary'
    target = report.output_path(
        config.output.out_dir, out or ('paths.bin' if binary else 'paths.csv')
    )
    if binary:
        with open(target, 'wb') as fp:
            pathio.write_paths(fp, ensemble, dict(config.stamp(), kind=kind.value))
    else:
        with open(target, 'w', newline='') as fp:
            pathio.write_csv(fp, ensemble)
    log.info("Paths written to <33>{}", target)

    finals = np.array([p.final_value for p in ensemble])
    horizon = config.sim.horizon
    if kind == PathKind.CSBP:
        oracle_mean = csbp_mean(mechanism, config.x, horizon)
    elif kind == PathKind.QPROCESS:
        oracle_mean = qprocess_mean(mechanism, config.x, horizon)
    else:
        oracle_mean = config.x - mechanism.rho * horizon

    data = dict(
        config.stamp(),
        kind=kind.value,
        output=target,
        final_value=weighted_mean_ci(finals, multiplier=config.multiplier).to_dict(),
        final_value_oracle=oracle_mean if math.isfinite(oracle_mean) else None,
        absorbed_fraction=float(np.mean([p.absorbed for p in ensemble])),
        mean_jumps=float(np.mean([len(p.atoms) for p in ensemble])),
    )
    report.write_json(report.output_path(config.output.out_dir, 'simulate.json'), data)
    report.show(data)


def condition(
    mech: Optional[str],
    x: Optional[float],
    paths: Optional[int],
    dt: Optional[float],
    eps: Optional[float],
    mode: Optional[str],
    t: Optional[float],
    theta: Optional[float],
    s: Sequence[float],
    csv_out: Optional[str],
) -> None:
    """ Estimate ``E^up exp(-theta Z_t)`` in the chosen mode and check it. """
    config = conf.from_context(mech, {
        'x': x,
        'paths': paths,
        'sim.dt': dt,
        'sim.eps': eps,
        'condition.mode': mode,
        'condition.t': t,
        'condition.theta': theta,
        'condition.s': list(s) or None,
    })
    mechanism = config.require_mechanism()
    opts = config.condition
    if not opts.t > 0:
        raise exc.ConfigError("must be > 0", field='condition.t')

    config = _at_horizon(config, opts.t)
    threads = context.get('threads', None)
    target = qprocess_laplace(mechanism, config.x, opts.theta, opts.t)
    extra: dict = {}

    if opts.mode == 'weight':
        samples = np.array(run_ensemble(
            PathKind.CSBP, mechanism, config.x, config.sim, config.paths,
            summarize=functools.partial(
                checks.weighted_laplace_sample,
                mech=mechanism,
                t=opts.t,
                theta=opts.theta,
            ),
            threads=threads,
        ))
        estimate = weighted_mean_ci(samples[:, 0], samples[:, 1], config.multiplier)
        reports = [check_estimate(
            'importance_laplace', estimate, target,
            effective_sample_size=effective_sample_size(samples[:, 1]),
        )]

    elif opts.mode == 'reject':
        ladder = survival_ladder(
            mechanism, config.x, opts.t,
            functools.partial(checks.laplace_functional, theta=opts.theta, t=opts.t),
            config.paths,
            config.sim,
            ladder=opts.s or None,
            threads=threads,
            multiplier=config.multiplier,
        )
        extra['ladder'] = [row.to_dict() for row in ladder]
        rung = best_rung(ladder)
        if rung is None or rung.estimate is None:
            raise exc.StatisticalError(
                "no s of the ladder kept enough surviving paths, use more paths"
            )
        reports = [check_estimate('survival_laplace', rung.estimate, target, s=rung.s)]

    else:
        reports, summaries = checks.marking_checks(mechanism, config, threads)
        table = report.output_path(config.output.out_dir, csv_out or 'marked.csv')
        report.write_rows(table, MARKED_COLUMNS, _marked_rows(summaries))
        extra['marked_atoms'] = table

    _finish(f"condition-{opts.mode}", config, reports, target=target, **extra)


def lamperti(
    mech: Optional[str],
    x: Optional[float],
    paths: Optional[int],
    dt: Optional[float],
    eps: Optional[float],
    direction: Optional[str],
    t: Optional[float],
    theta: Optional[float],
    csv_out: Optional[str],
) -> None:
    """ Run the checks of one Lamperti direction, dump the first path's clock. """
    config = conf.from_context(mech, {
        'x': x,
        'paths': paths,
        'sim.dt': dt,
        'sim.eps': eps,
        'lamperti.direction': direction,
        'lamperti.t': t,
        'lamperti.theta': theta,
    })
    mechanism = config.require_mechanism()
    direction = config.lamperti.direction
    threads = context.get('threads', None)
    first = config.sim.for_path(0)

    if direction == 'lz':
        reports = [checks.lamperti_laplace_check('lz', mechanism, config, threads)]
        rows = checks.lamperti_pairs(simulate_levy(mechanism, config.x, first))
    elif direction == 'zl':
        reports = [checks.occupation_clock_check(mechanism, config, threads)]
        rows = checks.lamperti_pairs(simulate_csbp(mechanism, config.x, first))
    else:
        reports = [checks.round_trip_check(mechanism, config)]
        rows = checks.lamperti_pairs(simulate_levy(mechanism, config.x, first))

    table = report.output_path(config.output.out_dir, csv_out or 'lamperti.csv')
    report.write_rows(table, LAMPERTI_COLUMNS, rows)
    _finish(f"lamperti-{direction}", config, reports, table=table)


def _finish(
    name: str,
    config: RunConfig,
    reports: List[CheckReport],
    **extra: Any
) -> None:
    for r in reports:
        r.seed = config.sim.seed

    data = dict(
        config.stamp(),
        checks=[r.to_dict() for r in reports],
        **{'pass': all(r.passed for r in reports)},
        **extra,
    )
    report.write_json(report.output_path(config.output.out_dir, f"{name}.json"), data)
    report.show(data)

    failed = [r.name for r in reports if not r.passed]
    if failed:
        raise exc.StatisticalError(f"failed checks: {', '.join(failed)}")

    log.info("All {} checks passed", len(reports))


def _at_horizon(config: RunConfig, horizon: float) -> RunConfig:
    sim = dataclasses.replace(config.sim, horizon=horizon, dt=min(config.sim.dt, horizon))
    return dataclasses.replace(config, sim=sim)


def _marked_rows(summaries: Sequence[dict]):
    for idx, summary in enumerate(summaries):
        for atom in summary['marked']:
            yield (
                idx,
                atom.t,
                atom.kind.value,
                atom.r,
                atom.nu,
                atom.delta_star,
                atom.accepted,
                summary['weight'],
            )
