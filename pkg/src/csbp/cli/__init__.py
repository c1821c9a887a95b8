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
""" CLI Commands

The commands are split into separate py modules, one with the command click
declaration and a separate implementation module. Loading the CLI then only
imports click; numpy, scipy and the simulator are imported when a given
command is executed.

Exit codes:

    \b
    0   every check passed
    1   a statistical check failed
    2   usage or config error
    3   numerical error or resource limit
"""
import functools
import sys
from typing import Any, Callable, Union

import click

import csbp


AnyFn = Callable[..., Any]


def verbose_option(fn: AnyFn) -> AnyFn:
    """ Decorator to add a --verbose option to any click command.

    The value won't be passed down to the command, but rather handled in the
    callback. The value will be accessible through `csbp.core.context` under
    'verbose' if the command needs it. To get the current value you can do:

        >>> from csbp.core import context
        >>>
        >>> verbose = context.get('verbose', 0)

    This value will be accessible from anywhere in the code.
    """

    def set_verbose(    # pylint: disable=missing-docstring
        ctx: click.Context,
        param: Union[click.Option, click.Parameter],
        value: Any
    ) -> Any:
        from csbp.core import context

        # The group and the command both carry the option, keep the larger.
        if value or not context.has('verbose'):
            context.set('verbose', max(value or 0, context.get('verbose', 0)))

    return click.option(
        '-v', '--verbose',
        expose_value=False,
        count=True,
        callback=set_verbose,
        help="Be verbose. Can specify multiple times for more verbosity.",
    )(fn)


def context_option(
    *param_decls: str,
    name: str,
    **attrs: Any
) -> Callable[[AnyFn], AnyFn]:
    """ An option stored in `csbp.core.context` under *name* instead of passed down. """

    def store(     # pylint: disable=missing-docstring
        ctx: click.Context,
        param: Union[click.Option, click.Parameter],
        value: Any
    ) -> Any:
        from csbp.core import context

        if value is not None:
            context.set(name, value)

    def decorator(fn: AnyFn) -> AnyFn:
        return click.option(*param_decls, expose_value=False, callback=store, **attrs)(fn)

    return decorator


def handle_errors(fn: AnyFn) -> AnyFn:
    """ Turn library errors into a one line message and the matching exit code. """

    @functools.wraps(fn)
    def wrapper(*args: Any, **kw: Any) -> Any:
        from csbp.core import exc, log

        try:
            return fn(*args, **kw)
        except exc.CsbpError as ex:
            log.err(str(ex))
            sys.exit(ex.exit_code)

    return wrapper


@click.group()
@click.version_option(version=csbp.__version__, message='%(version)s')
@context_option(
    '-c', '--config',
    name='config',
    type=click.Path(dir_okay=False),
    help="Run config file. By default csbp.json, csbp.yaml or a [tool.csbp] "
         "table in pyproject.toml is searched for in the current directory "
         "and its parents.",
)
@context_option(
    '--seed',
    name='seed',
    type=click.IntRange(min=0),
    help="Run seed, overrides sim.seed from the config.",
)
@context_option(
    '--threads',
    name='threads',
    type=click.IntRange(min=1),
    help="Number of worker processes for the ensembles.",
)
@context_option(
    '--out-dir',
    name='out_dir',
    type=click.Path(file_okay=False),
    help="Where reports and tables are written, overrides output.out_dir.",
)
@verbose_option
def csbp_cli() -> None:
    """

    Simulate continuous state branching processes, condition them on
    non-extinction and check every estimate against its analytic value.

    To get help for a specific command:

       \033[1m csbp <command> --help\033[0m

    Examples:

       \033[1m csbp init --preset feller\033[0m

       \033[1m csbp --seed 7 simulate --paths 100 --qprocess\033[0m

       \033[1m csbp verify all\033[0m

    """
    pass
