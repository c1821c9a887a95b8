""" Various utilities to help write tests for csbp. """
import json
import math
import os
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from csbp.core.simulate import JumpAtom, PathKind, SimConfig, SimPath


def make_path(
    times: Sequence[float],
    values: Sequence[float],
    left_values: Optional[Sequence[float]] = None,
    kind: PathKind = PathKind.CSBP,
    atoms: Optional[List[JumpAtom]] = None,
    atom_ids: Optional[Sequence[int]] = None,
    increments: Optional[Sequence[float]] = None,
    absorption_time: float = math.inf,
    **config: Any,
) -> SimPath:
    """ Build a `SimPath` by hand, for tests that need exact numbers.

    Left limits default to the values and Brownian increments to 0. Extra
    keyword arguments go to `SimConfig`; the horizon is the last time.
    """
    times_arr = np.asarray(times, dtype=float)
    config.setdefault('horizon', float(times_arr[-1]))
    config.setdefault('dt', min(0.1, float(times_arr[-1])))

    return SimPath(
        kind=kind,
        x=float(values[0]),
        config=SimConfig(**config),
        times=times_arr,
        values=np.asarray(values, dtype=float),
        left_values=np.asarray(
            values if left_values is None else left_values, dtype=float
        ),
        brownian_increments=(
            np.zeros(len(times_arr) - 1) if increments is None
            else np.asarray(increments, dtype=float)
        ),
        atom_ids=np.asarray(
            [-1] * len(times_arr) if atom_ids is None else atom_ids, dtype=np.int64
        ),
        atoms=atoms or [],
        absorption_time=absorption_time,
    )


def write_config(directory: str, data: Dict[str, Any], name: str = 'csbp.json') -> str:
    """ Write a JSON run config and return its path. """
    path = os.path.join(str(directory), name)
    with open(path, 'w') as fp:
        json.dump(data, fp)
    return path
