"""
.. module:: csbp.core.report
    :synopsis: Writing JSON reports and CSV tables next to each other in the output dir.
"""
import csv
import math
import os
from typing import Any, Dict, Iterable, Sequence

from . import log, shell, util


def output_path(out_dir: str, name: str) -> str:
    """ *name* inside *out_dir*, creating the directory. Absolute names are kept. """
    if os.path.isabs(name):
        return name

    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def write_json(path: str, data: Dict[str, Any]) -> str:
    with open(path, 'w') as fp:
        fp.write(util.json_dump(data) + '\n')

    log.info("Report written to <33>{}", path)
    return path


def write_rows(path: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """ CSV with a header line.

    Floats use ``repr`` so they read back exactly, NaN is written empty.
    """
    with open(path, 'w', newline='') as fp:
        writer = csv.writer(fp)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])

    log.info("Table written to <33>{}", path)
    return path


def show(data: Dict[str, Any]) -> None:
    """ Pretty print a report, only with ``-v``. """
    if log.get_verbosity() > 0:
        print(shell.highlight(util.json_dump(data), 'json'))


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return '' if math.isnan(value) else repr(float(value))
    return str(value)
