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
""" Mechanism inspection commands. """
from typing import List, Optional

from . import click, csbp_cli, handle_errors, verbose_option


@csbp_cli.group('mechanism')
def mechanism_cli() -> None:
    """ Inspect a branching mechanism. """
    pass


@mechanism_cli.command('describe')
@click.option(
    '-m', '--mech',
    metavar='JSON',
    help="Mechanism as inline JSON or a JSON file, overrides the config."
)
@click.option(
    '--lam', 'lams',
    type=float,
    multiple=True,
    help="Evaluate psi and phi at this point, can be given multiple times."
)
@verbose_option
@handle_errors
def describe(mech: Optional[str], lams: List[float]) -> None:
    """ Print rho, the criticality class and the standing assumption checks.

    Examples::

        \b
        $ csbp mechanism describe
        $ csbp mechanism describe -m '{"levy": {"kind": "stable", "k": 1, "alpha": 1.5}}'

    """
    from . import mechanism_impl
    mechanism_impl.describe(mech, lams)


@mechanism_cli.command('validate')
@click.option(
    '-m', '--mech',
    metavar='JSON',
    help="Mechanism as inline JSON or a JSON file, overrides the config."
)
@verbose_option
@handle_errors
def validate(mech: Optional[str]) -> None:
    """ Exit with 0 when the mechanism can be conditioned on non-extinction.

    That needs a conservative, not supercritical mechanism whose CSBP dies
    out almost surely. Any failed assumption exits with 2.
    """
    from . import mechanism_impl
    mechanism_impl.validate(mech)
