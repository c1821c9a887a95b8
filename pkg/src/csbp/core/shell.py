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
.. module:: csbp.core.shell
    :synopsis: Terminal output, color tags and syntax highlighting.

Messages carry color tags, the SGR code in angle brackets (``<32>`` green,
``<0>`` reset). On a terminal `fmt` turns them into escape sequences,
elsewhere it drops them so output piped to a file stays plain text.
"""
import re
import sys
from typing import Any, Optional, TextIO


COLOR_TAG = re.compile(r'<(\d{1,2})>')
HIGHLIGHT_LANGS = ('json', 'yaml')

is_tty = sys.stdout.isatty()


def decolorize(text: str) -> str:
    """ *text* without its color tags. """
    return COLOR_TAG.sub('', text)


def fmt(msg: str, *args: Any, **kw: Any) -> str:
    """ Format *msg* with the given arguments and resolve its color tags. """
    if args or kw:
        msg = msg.format(*args, **kw)

    return COLOR_TAG.sub('\x1b[\\1m' if is_tty else '', msg)


def write(msg: str, stream: Optional[TextIO] = None) -> None:
    """ Write one tagged line to *stream* (stdout by default), reset at its end. """
    (stream or sys.stdout).write(fmt(msg + '<0>') + '\n')


def highlight(code: str, lang: str) -> str:
    """ Syntax highlight a JSON or YAML snippet for a 256 color terminal.

    Off a terminal *code* is returned untouched.

    Raises:
        ValueError: *lang* is not one of ``HIGHLIGHT_LANGS``.
    """
    if lang not in HIGHLIGHT_LANGS:
        raise ValueError(f"can't highlight {lang!r}, only {', '.join(HIGHLIGHT_LANGS)}")

    if not is_tty:
        return code

    import pygments
    from pygments.formatters.terminal256 import Terminal256Formatter
    from pygments.lexers import get_lexer_by_name

    return pygments.highlight(code, get_lexer_by_name(lang), Terminal256Formatter())
