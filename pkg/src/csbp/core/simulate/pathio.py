"""
.. module:: csbp.core.simulate.pathio
    :synopsis: Binary dump and CSV export of simulated paths.

Binary layout, all little-endian::

    4s   magic  b'CSBP'
    <H   format version
    <I   header length in bytes
    ...  UTF-8 JSON header: version stamp, kind, x, mechanism, config, n_paths
    then for every path:
    <I   number of records
    records of <f8 t, <f8 value, <f8 left_value, <u1 is_jump, <f8 r, <f8 nu, <f8 u

``r``, ``nu`` and ``u`` are NaN on knots that carry no atom.
"""
import csv
import dataclasses
import json
import math
import struct
from typing import Any, BinaryIO, Dict, List, Sequence, TextIO

import numpy as np

from csbp.core import exc
from .types import SimPath


MAGIC = b'CSBP'
FORMAT_VERSION = 1
CSV_COLUMNS = ('path', 't', 'value', 'is_jump', 'r', 'nu', 'u')
RECORD_DTYPE = np.dtype([
    ('t', '<f8'),
    ('value', '<f8'),
    ('left_value', '<f8'),
    ('is_jump', 'u1'),
    ('r', '<f8'),
    ('nu', '<f8'),
    ('u', '<f8'),
])


@dataclasses.dataclass
class PathDump:
    """ Contents of a binary dump: the header and one record array per path. """
    header: Dict[str, Any]
    records: List[np.ndarray]


def path_records(path: SimPath) -> np.ndarray:
    """ One structured record per knot of *path*. """
    out = np.zeros(len(path.times), dtype=RECORD_DTYPE)
    out['t'] = path.times
    out['value'] = path.values
    out['left_value'] = path.left_values
    out['r'] = out['nu'] = out['u'] = np.nan

    for knot in np.flatnonzero(path.atom_ids >= 0):
        atom = path.atoms[path.atom_ids[knot]]
        out['is_jump'][knot] = int(atom.accepted)
        out['r'][knot] = atom.r
        out['nu'][knot] = atom.nu
        out['u'][knot] = atom.u

    return out


def write_paths(fp: BinaryIO, paths: Sequence[SimPath], header: Dict[str, Any]) -> None:
    """ Write *paths* with a JSON *header* (the run stamp) to a binary stream. """
    meta = dict(header, n_paths=len(paths))
    meta_bytes = json.dumps(meta, sort_keys=True).encode('utf-8')

    fp.write(MAGIC)
    fp.write(struct.pack('<HI', FORMAT_VERSION, len(meta_bytes)))
    fp.write(meta_bytes)

    for path in paths:
        records = path_records(path)
        fp.write(struct.pack('<I', len(records)))
        fp.write(records.tobytes())


def read_paths(fp: BinaryIO) -> PathDump:
    """ Inverse of `write_paths`.

    Raises:
        DomainError: not a path dump, an unknown format version or a
            truncated file.
    """
    if fp.read(4) != MAGIC:
        raise exc.DomainError("not a csbp path dump (bad magic)")

    version, header_len = struct.unpack('<HI', _read_exact(fp, 6))
    if version != FORMAT_VERSION:
        raise exc.DomainError(f"unsupported path dump version {version}")

    header = json.loads(_read_exact(fp, header_len).decode('utf-8'))
    records = []

    for _ in range(header.get('n_paths', 0)):
        (count,) = struct.unpack('<I', _read_exact(fp, 4))
        data = _read_exact(fp, count * RECORD_DTYPE.itemsize)
        records.append(np.frombuffer(data, dtype=RECORD_DTYPE, count=count))

    return PathDump(header, records)


def write_csv(fp: TextIO, paths: Sequence[SimPath]) -> None:
    """ Flat CSV of every knot of every path; NaN fields are left empty. """
    writer = csv.writer(fp)
    writer.writerow(CSV_COLUMNS)

    for path in paths:
        for rec in path_records(path):
            writer.writerow([
                path.config.path_index,
                repr(float(rec['t'])),
                repr(float(rec['value'])),
                int(rec['is_jump']),
                _csv_float(rec['r']),
                _csv_float(rec['nu']),
                _csv_float(rec['u']),
            ])


def _csv_float(value: float) -> str:
    value = float(value)
    return '' if math.isnan(value) else repr(value)


def _read_exact(fp: BinaryIO, size: int) -> bytes:
    data = fp.read(size)
    if len(data) != size:
        raise exc.DomainError(
            f"truncated path dump: wanted {size} bytes, got {len(data)}"
        )
    return data
