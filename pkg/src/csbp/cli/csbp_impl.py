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
""" Root level commands implementation. """
import os
from typing import List, Optional

from csbp.core import conf, context, exc, log, report, shell, templates
from csbp.core import laplace as oracles
from csbp.core import verify as suites
from csbp.core.mechanism import check_regularity


LAPLACE_COLUMNS = ('t', 'theta', 'u', 'csbp_laplace', 'qprocess_laplace')


def init(preset: str, output: str, force: bool) -> None:
    """ Render the preset config template into *output*. """
    if os.path.exists(output) and not force:
        raise exc.DomainError(f"{output} already exists, use --force to overwrite it")

    ctx = templates.preset_context(preset, seed=context.get('seed', 0))
    content = templates.Engine().render_file('csbp.json.j2', ctx)
    # The template must always produce a config we accept.
    conf.parse_config(content, output)

    with open(output, 'w') as fp:
        fp.write(content)

    log.info("Config for the <35>{}<32> preset written to <33>{}", preset, output)
    if log.get_verbosity() > 0:
        print(shell.highlight(content, 'json'))


def laplace(
    mech: Optional[str],
    x: Optional[float],
    thetas: List[float],
    times: List[float],
    out: Optional[str],
) -> None:
    """ Write the Laplace table and its report. """
    config = conf.from_context(mech, {
        'x': x,
        'laplace.thetas': list(thetas) or None,
        'laplace.times': list(times) or None,
    })
    mechanism = config.require_mechanism()
    out_dir = config.output.out_dir

    rows = oracles.laplace_table(
        mechanism, config.x, config.laplace.thetas, config.laplace.times
    )
    report.write_rows(
        report.output_path(out_dir, out or 'laplace.csv'),
        LAPLACE_COLUMNS,
        ([row[col] for col in LAPLACE_COLUMNS] for row in rows),
    )

    extinction = []
    if check_regularity(mechanism).almost_sure_extinction:
        for t in sorted(set(config.laplace.times) - {0.0}):
            limit = oracles.extinction_u(mechanism, t)
            extinction.append({
                't': t,
                'u_inf': limit.value,
                'survival_probability': oracles.survival_probability(
                    mechanism, config.x, t
                ),
                'ladder': limit.ladder,
                'ladder_values': limit.ladder_values,
                'extrapolants': limit.extrapolants,
            })
    else:
        log.info("Extinction is not almost sure, skipping u_t(inf)")

    data = dict(config.stamp(), rows=rows, extinction=extinction)
    report.write_json(report.output_path(out_dir, 'laplace.json'), data)
    report.show(data)


def verify(suite: str, paths: Optional[int], dt: Optional[float]) -> None:
    """ Run *suite* and fail with exit code 1 when any check failed. """
    config = conf.from_context(overrides={'paths': paths, 'sim.dt': dt})
    result = suites.run_verify(suite, config, threads=context.get('threads', None))

    data = result.to_dict()
    out = report.output_path(config.output.out_dir, f"verify-{suite}.json")
    report.write_json(out, data)
    report.show(data)

    failed = [r.name for r in result.reports if not r.passed]
    if failed:
        raise exc.StatisticalError(
            f"{len(failed)} of {len(result.reports)} checks failed: {', '.join(failed)}"
        )

    log.info("All {} checks passed", len(result.reports))
