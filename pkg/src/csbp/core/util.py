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
.. module:: csbp.core.util
    :synopsis: Small helpers with no dependencies inside the project.
"""
import json
import time
from typing import Any, Dict, Iterator, List, Sequence, TextIO, Union

import tomlkit
import yaml


try:
    from yaml import CSafeLoader as Loader
except ImportError:
    from yaml import SafeLoader as Loader  # type: ignore


TextOrStream = Union[str, TextIO]
PlainDict = Dict[str, Any]


class timed_block(object):  # noqa
    """ Wall time of a block of code.

    Example:
        >>> from csbp.core import util
        >>>
        >>> with util.timed_block() as t:
        ...     total = sum(range(1000))
        >>>
        >>> t.elapsed_s < 1
        True

    Attributes:
        elapsed (float):
            Seconds spent inside the block.
        elapsed_s (float):
            The same, rounded to milliseconds for the log.
    """
    elapsed: float = 0.0
    elapsed_s: float = 0.0

    def __enter__(self) -> 'timed_block':
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.elapsed = time.perf_counter() - self._start
        self.elapsed_s = round(self.elapsed, 3)


def in_batches(items: Sequence[Any], batch_size: int) -> Iterator[List[Any]]:
    """ Contiguous slices of *items*, used to hand path indices to the workers.

    Example:
        >>> list(in_batches(range(7), 3))
        [[0, 1, 2], [3, 4, 5], [6]]
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")

    for start in range(0, len(items), batch_size):
        yield list(items[start:start + batch_size])


def yaml_load(str_or_fp: TextOrStream) -> Any:
    return yaml.load(str_or_fp, Loader=Loader)


def toml_load(path_or_fp: TextOrStream) -> PlainDict:
    """ TOML document as a plain dict, without tomlkit's formatting wrappers. """
    if isinstance(path_or_fp, str):
        with open(path_or_fp) as fp:
            return tomlkit.parse(fp.read()).unwrap()

    return tomlkit.parse(path_or_fp.read()).unwrap()


def json_dump(data: Any, indent: int = 2) -> str:
    """ JSON with sorted keys so reruns with the same seed are byte identical. """
    return json.dumps(data, indent=indent, sort_keys=True, allow_nan=True)


def set_in_dict(dct: PlainDict, path: str, value: Any) -> None:
    """ Set a value by its dotted name, creating the tables on the way.

    Examples:
        >>> d = {'sim': {'dt': 0.001}}
        >>> set_in_dict(d, 'sim.dt', 0.01)
        >>> set_in_dict(d, 'laplace.times', [1.0])
        >>> d
        {'sim': {'dt': 0.01}, 'laplace': {'times': [1.0]}}

    Raises:
        KeyError: a part of *path* holds a value that is not a table.
    """
    *tables, name = path.split('.')
    curr = dct

    for i, table in enumerate(tables):
        curr = curr.setdefault(table, {})
        if not isinstance(curr, dict):
            raise KeyError('.'.join(tables[:i + 1]))

    curr[name] = value
