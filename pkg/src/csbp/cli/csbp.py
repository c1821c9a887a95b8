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
""" Root level CLI commands. """
from typing import List, Optional

from . import click, csbp_cli, handle_errors, verbose_option


SUITE_NAMES = [
    'laplace',
    'martingale',
    'qprocess',
    'marking',
    'girsanov',
    'lamperti',
    'stable',
    'all',
]


@csbp_cli.command('init')
@click.option(
    '-p', '--preset',
    type=click.Choice(['feller', 'critical', 'stable']),
    default='feller',
    help="Mechanism of the generated config."
)
@click.option(
    '-o', '--output',
    type=click.Path(dir_okay=False),
    default='csbp.json',
    help="Where to write the config."
)
@click.option(
    '-f', '--force',
    is_flag=True,
    help="Overwrite the config if it already exists."
)
@verbose_option
@handle_errors
def init(preset: str, output: str, force: bool) -> None:
    """ Create a run config from a preset.

    Examples::

        \b
        $ csbp init                     # subcritical Feller diffusion
        $ csbp init --preset stable -o stable.json
        $ csbp --seed 3 init --force    # overwrite, with sim.seed = 3

    """
    from . import csbp_impl
    csbp_impl.init(preset, output, force)


@csbp_cli.command('laplace')
@click.option(
    '-m', '--mech',
    metavar='JSON',
    help="Mechanism as inline JSON or a JSON file, overrides the config."
)
@click.option('--x', 'x', type=float, help="Starting point.")
@click.option(
    '--theta', 'thetas',
    type=float,
    multiple=True,
    help="Transform argument, can be given multiple times."
)
@click.option(
    '--t', 'times',
    type=float,
    multiple=True,
    help="Time, can be given multiple times."
)
@click.option(
    '-o', '--out',
    type=click.Path(dir_okay=False),
    help="CSV table path, laplace.csv in the output dir by default."
)
@verbose_option
@handle_errors
def laplace(
    mech: Optional[str],
    x: Optional[float],
    thetas: List[float],
    times: List[float],
    out: Optional[str],
) -> None:
    """ Tabulate u_t(theta) and both Laplace transforms.

    Writes a CSV with columns t, theta, u, csbp_laplace, qprocess_laplace and
    a JSON report with the extinction ladder for every t.

    Examples::

        \b
        $ csbp laplace --mech '{"a": 0, "sigma": 1.4142135623730951}'
        $ csbp laplace --theta 1 --theta 10 --t 0.5 --t 1

    """
    from . import csbp_impl
    csbp_impl.laplace(mech, x, thetas, times, out)


@csbp_cli.command('verify')
@click.argument('suite', type=click.Choice(SUITE_NAMES))
@click.option('--paths', type=click.IntRange(min=2), help="Paths per ensemble.")
@click.option('--dt', type=float, help="Euler step.")
@verbose_option
@handle_errors
def verify(suite: str, paths: Optional[int], dt: Optional[float]) -> None:
    """ Run a verification suite and write its JSON report.

    Exits with 0 when every check passes and 1 when any fails.

    \b
    laplace     ODE against closed forms, semigroup, transform examples
    martingale  E exp(rho t) Z_t = x and the CSBP Laplace transform
    qprocess    direct, importance weighted and survival conditioned estimators
    marking     immigrant and retained jump intensities, Poisson boxes
    girsanov    the drift corrected Brownian motion is standard
    lamperti    time changed Levy paths and the round trip error
    stable      theta atoms and the subordinator of a stable Q-process
    all         every suite above

    Examples::

        \b
        $ csbp verify laplace
        $ csbp --seed 1 --threads 4 verify qprocess --paths 100000

    """
    from . import csbp_impl
    csbp_impl.verify(suite, paths, dt)
