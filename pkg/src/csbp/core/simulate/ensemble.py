"""
.. module:: csbp.core.simulate.ensemble
    :synopsis: Many paths, optionally spread over worker processes.

Path ``i`` of an ensemble always uses ``config.for_path(i)``, so the result
list is the same for any number of workers. A *summarize* callback reduces
each path to whatever the caller needs before it leaves the worker; it has to
be picklable (a module level function or a ``functools.partial`` of one).
"""
import concurrent.futures as cf
import math
from typing import Any, Callable, List, Optional, Sequence, Tuple

from csbp.core import context, exc, log, util
from csbp.core.mechanism import BranchingMechanism
from .engine import simulate_path
from .types import PathKind, SimConfig, SimPath


PathSummary = Callable[[SimPath], Any]
BatchJob = Tuple[
    PathKind, BranchingMechanism, float, SimConfig, Sequence[int], Optional[PathSummary]
]


def run_ensemble(
    kind: PathKind,
    mech: BranchingMechanism,
    x: float,
    config: SimConfig,
    n_paths: int,
    summarize: Optional[PathSummary] = None,
    threads: Optional[int] = None,
) -> List[Any]:
    """ Simulate paths ``0 .. n_paths - 1`` and return their summaries in order.

    Args:
        kind (PathKind):
            ``csbp``, ``qprocess`` or ``levy``.
        mech (BranchingMechanism):
            Shared by every path.
        x (float):
            Starting point.
        config (SimConfig):
            The ``path_index`` field is ignored and replaced per path.
        n_paths (int):
            Ensemble size.
        summarize (Callable[[SimPath], Any]):
            Applied to each path inside the worker. ``None`` keeps the paths.
        threads (int):
            Number of worker processes. Defaults to the ``--threads`` value
            from the run context, or 1.
    """
    if n_paths <= 0:
        raise exc.DomainError(f"n_paths must be > 0, got {n_paths}")

    kind = PathKind(kind)
    threads = threads or context.get('threads', 1)
    indices = range(n_paths)

    with util.timed_block() as t:
        if threads <= 1 or n_paths < 2 * threads:
            results = _run_batch((kind, mech, x, config, indices, summarize))

        else:
            batch_size = max(1, math.ceil(n_paths / (4 * threads)))
            jobs = [
                (kind, mech, x, config, batch, summarize)
                for batch in util.in_batches(indices, batch_size)
            ]
            results = []
            with cf.ProcessPoolExecutor(max_workers=threads) as pool:
                # map() keeps submission order, which keeps the path order.
                for batch_result in pool.map(_run_batch, jobs):
                    results.extend(batch_result)

    log.detail(
        "simulated {} {} paths in {}s ({} workers)",
        n_paths, kind.value, t.elapsed_s, max(1, threads),
    )
    return results


def _run_batch(job: BatchJob) -> List[Any]:
    kind, mech, x, config, indices, summarize = job
    out = []

    for idx in indices:
        path = simulate_path(kind, mech, x, config.for_path(idx))
        out.append(summarize(path) if summarize else path)

    return out
