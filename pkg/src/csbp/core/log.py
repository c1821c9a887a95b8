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
"""
.. module:: csbp.core.log
    :synopsis: The run log printed to the terminal.

`err` goes to stderr and `info` to stdout, always. `detail` needs ``-v``
and `dbg` ``-vvv``. Messages are `str.format` templates and may carry
`csbp.core.shell` color tags.
"""
import os
import sys
from typing import Any, Dict, Optional, Sequence, TextIO

from . import context, exc, shell


VERBOSE_ENV = 'CSBP_VERBOSE'


def info(msg: str, *args: Any, **kw: Any) -> None:
    """ Flow of a run: which ensemble is simulated, where a report went. """
    _emit(0, '<32>', msg, args, kw)


def err(msg: str, *args: Any, **kw: Any) -> None:
    _emit(0, '<31>', msg, args, kw, stream=sys.stderr)


def detail(msg: str, *args: Any, **kw: Any) -> None:
    """ Per check and per ensemble details, with ``-v``. """
    _emit(1, '<0>', msg, args, kw)


def dbg(msg: str, *args: Any, **kw: Any) -> None:
    _emit(3, '<90>', msg, args, kw)


def get_verbosity() -> int:
    """ The ``--verbose`` count, or ``CSBP_VERBOSE`` before the CLI parsed it.

    Config discovery can run before the options are parsed, the environment
    variable is the only way to see its debug output.
    """
    verbose = context.get('verbose', None)
    if verbose is not None:
        return verbose

    raw = os.environ.get(VERBOSE_ENV, '0')
    if not raw.isdigit():
        raise exc.ConfigError(f"expected a number, got {raw!r}", field=VERBOSE_ENV)

    return int(raw)


def _emit(
    level: int,
    color: str,
    msg: str,
    args: Sequence[Any],
    kw: Dict[str, Any],
    stream: Optional[TextIO] = None,
) -> None:
    if level and get_verbosity() < level:
        return

    if args or kw:
        msg = msg.format(*args, **kw)

    shell.write(f"-- {color}{msg}", stream)
