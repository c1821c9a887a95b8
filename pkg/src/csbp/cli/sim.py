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
""" Commands that simulate ensembles. """
from typing import Any, Callable, List

from . import AnyFn, click, csbp_cli, handle_errors, verbose_option


def mech_option(fn: AnyFn) -> AnyFn:
    return click.option(
        '-m', '--mech',
        metavar='JSON',
        help="Mechanism as inline JSON or a JSON file, overrides the config."
    )(fn)


def ensemble_options(fn: AnyFn) -> AnyFn:
    """ Flags shared by every command that runs an ensemble. """
    decorators: List[Callable[[AnyFn], AnyFn]] = [
        click.option('--x', 'x', type=float, help="Starting point."),
        click.option('--paths', type=click.IntRange(min=2), help="Number of paths."),
        click.option('--dt', type=float, help="Euler step."),
        click.option('--eps', type=float, help="Small jump cutoff, in (0, 1]."),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


@csbp_cli.command('simulate')
@mech_option
@ensemble_options
@click.option('--T', 'horizon', type=float, help="Horizon.")
@click.option('--seed', type=click.IntRange(min=0), help="Run seed.")
@click.option('--qprocess', is_flag=True, help="Simulate the conditioned process.")
@click.option(
    '--levy',
    is_flag=True,
    help="Simulate the spectrally positive Levy process."
)
@click.option(
    '-f', '--format', 'fmt',
    type=click.Choice(['binary', 'csv']),
    help="Path dump format, output.format from the config by default."
)
@click.option(
    '-o', '--out',
    type=click.Path(dir_okay=False),
    help="Path dump file, paths.bin or paths.csv in the output dir by default."
)
@verbose_option
@handle_errors
def simulate(**options: Any) -> None:
    """ Simulate an ensemble and dump every path.

    The binary dump starts with a JSON header holding the version, the
    mechanism, the whole config and the seed. A simulate.json report with the
    ensemble summary is written next to it.

    Examples::

        \b
        $ csbp simulate --paths 100 --T 2
        $ csbp simulate --qprocess --seed 3 -f csv -o q.csv
        $ csbp simulate --mech '{"a": 0, "sigma": 1.4142135623730951}'

    """
    from . import sim_impl
    sim_impl.simulate(**options)


@csbp_cli.command('condition')
@mech_option
@ensemble_options
@click.option(
    '--mode',
    type=click.Choice(['weight', 'mark', 'reject']),
    help="How to condition on non-extinction, condition.mode by default."
)
@click.option('--t', 't', type=float, help="Time of the functional.")
@click.option('--theta', type=float, help="Argument of exp(-theta Z_t).")
@click.option(
    '--s', 's',
    type=float,
    multiple=True,
    help="Extra survival time for --mode reject, can be given multiple times."
)
@click.option(
    '--csv', 'csv_out',
    type=click.Path(dir_okay=False),
    help="Marked atoms table for --mode mark, marked.csv in the output dir by default."
)
@verbose_option
@handle_errors
def condition(**options: Any) -> None:
    """ Estimate under the law conditioned on non-extinction.

    \b
    weight  weight CSBP paths by exp(rho t) Z_t / x
    reject  keep the paths alive at t + s, for every s of the ladder
    mark    split the weighted jumps into retained jumps and immigrants

    Writes condition-<mode>.json and exits with 1 when a check fails.

    Examples::

        \b
        $ csbp condition --mode weight --theta 2
        $ csbp condition --mode reject --s 1 --s 5 --paths 100000
        $ csbp condition --mode mark --csv atoms.csv

    """
    from . import sim_impl
    sim_impl.condition(**options)


@csbp_cli.command('lamperti')
@mech_option
@ensemble_options
@click.option(
    '--direction',
    type=click.Choice(['lz', 'zl', 'roundtrip']),
    help="lz: Levy to CSBP, zl: CSBP to Levy, roundtrip: both. "
         "lamperti.direction by default."
)
@click.option('--t', 't', type=float, help="Time of the Laplace check.")
@click.option('--theta', type=float, help="Argument of the Laplace check.")
@click.option(
    '--csv', 'csv_out',
    type=click.Path(dir_okay=False),
    help="Time change of the first path, lamperti.csv in the output dir by default."
)
@verbose_option
@handle_errors
def lamperti(**options: Any) -> None:
    """ Time change paths between the Levy process and the CSBP.

    The CSV has the columns source_time, target_time and value for the first
    path of the ensemble. lamperti-<direction>.json holds the checks.

    Examples::

        \b
        $ csbp lamperti --direction lz --paths 2000
        $ csbp lamperti --direction roundtrip --dt 0.01

    """
    from . import sim_impl
    sim_impl.lamperti(**options)
