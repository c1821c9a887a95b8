"""
.. module:: csbp.core.stats
    :synopsis: Estimators with confidence bands and the statistical checks built on them.

All estimators are self-normalized weighted means::

    mu = sum(w * y) / sum(w)
    se^2 = n / (n - 1) * sum(w^2 * (y - mu)^2) / sum(w)^2

With unit weights this is the textbook ``s / sqrt(n)``. A check passes when
the estimate lies within ``multiplier * se`` of its target.
"""
import dataclasses
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import exc
from .mechanism import BranchingMechanism, require_not_supercritical


DEFAULT_MULTIPLIER = 3.0
BOX_MULTIPLIER = 4.0
ArrayLike = Union[Sequence[float], np.ndarray]


@dataclasses.dataclass(frozen=True)
class WeightedSample:
    """ A functional evaluated on one path and the path's likelihood ratio. """
    value: float
    weight: float = 1.0


@dataclasses.dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    stderr: float
    n: int
    half_width: float
    multiplier: float = DEFAULT_MULTIPLIER

    @property
    def interval(self) -> Tuple[float, float]:
        return self.mean - self.half_width, self.mean + self.half_width

    def covers(self, target: float) -> bool:
        slack = 1e-12 * max(1.0, abs(target))
        return abs(self.mean - target) <= self.half_width + slack

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class CheckReport:
    """ Outcome of one statistical assertion, serialized into the JSON reports. """
    name: str
    estimate: float
    stderr: float
    target: float
    band: float
    passed: bool
    n: int
    seed: Optional[int] = None
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'name': self.name,
            'estimate': _json_float(self.estimate),
            'stderr': _json_float(self.stderr),
            'target': _json_float(self.target),
            'band': _json_float(self.band),
            'pass': bool(self.passed),
            'n': int(self.n),
            'seed': self.seed,
        }
        if self.details:
            out['details'] = self.details
        return out


@dataclasses.dataclass
class MomentAccumulator:
    """ Weighted moment sums that can be merged across workers.

    Example:

        >>> from csbp.core.stats import MomentAccumulator
        >>> acc = MomentAccumulator()
        >>> acc.add([1.0, 2.0])
        >>> other = MomentAccumulator()
        >>> other.add([3.0])
        >>> acc.merge(other).estimate(multiplier=1).mean
        2.0
    """
    n: int = 0
    sw: float = 0.0
    swy: float = 0.0
    sw2: float = 0.0
    sw2y: float = 0.0
    sw2y2: float = 0.0

    def add(self, values: ArrayLike, weights: Optional[ArrayLike] = None) -> None:
        y, w = _as_arrays(values, weights)
        self.n += len(y)
        self.sw += float(np.sum(w))
        self.swy += float(np.sum(w * y))
        self.sw2 += float(np.sum(w * w))
        self.sw2y += float(np.sum(w * w * y))
        self.sw2y2 += float(np.sum(w * w * y * y))

    def merge(self, other: 'MomentAccumulator') -> 'MomentAccumulator':
        return MomentAccumulator(*(
            getattr(self, f.name) + getattr(other, f.name)
            for f in dataclasses.fields(self)
        ))

    def estimate(self, multiplier: float = DEFAULT_MULTIPLIER) -> EstimateWithCI:
        if self.n < 2:
            raise exc.DomainError(f"need at least 2 samples, got {self.n}")
        if self.sw <= 0:
            raise exc.StatisticalError("all weights are zero")

        mean = self.swy / self.sw
        ss = self.sw2y2 - 2.0 * mean * self.sw2y + mean * mean * self.sw2
        var = self.n / (self.n - 1) * max(ss, 0.0) / (self.sw * self.sw)
        return _estimate(mean, math.sqrt(var), self.n, multiplier)


def weighted_mean_ci(
    samples: Union[Sequence[WeightedSample], ArrayLike],
    weights: Optional[ArrayLike] = None,
    multiplier: float = DEFAULT_MULTIPLIER,
) -> EstimateWithCI:
    """ Self-normalized mean with a delta-method standard error.

    *samples* is either a sequence of `WeightedSample` or plain values with
    optional *weights* (unit weights when omitted).

    Raises:
        DomainError: fewer than 2 samples or negative weights.
        StatisticalError: all weights are zero.

    Examples:

        >>> from csbp.core.stats import weighted_mean_ci
        >>> weighted_mean_ci([0.0, 1.0], multiplier=1)
        EstimateWithCI(mean=0.5, stderr=0.5, n=2, half_width=0.5, multiplier=1)
        >>> weighted_mean_ci([3.0, 7.0], weights=[2.0, 0.0]).mean
        3.0
    """
    if len(samples) and isinstance(samples[0], WeightedSample):
        values = [s.value for s in samples]     # type: ignore
        weights = [s.weight for s in samples]   # type: ignore
    else:
        values = samples    # type: ignore

    y, w = _as_arrays(values, weights)
    n = len(y)
    if n < 2:
        raise exc.DomainError(f"need at least 2 samples, got {n}")

    total = float(np.sum(w))
    if total <= 0:
        raise exc.StatisticalError("all weights are zero")

    mean = float(np.sum(w * y)) / total
    ss = float(np.sum(w * w * (y - mean) ** 2))
    var = n / (n - 1) * ss / (total * total)
    return _estimate(mean, math.sqrt(var), n, multiplier)


def effective_sample_size(weights: ArrayLike) -> float:
    """ Kish's ``(sum w)^2 / sum w^2``. """
    w = np.asarray(weights, dtype=float)
    sw2 = float(np.sum(w * w))
    return float(np.sum(w)) ** 2 / sw2 if sw2 > 0 else 0.0


def check_estimate(
    name: str,
    estimate: EstimateWithCI,
    target: float,
    seed: Optional[int] = None,
    **details: Any,
) -> CheckReport:
    """ Pass when *target* lies within the estimate's band. """
    return CheckReport(
        name=name,
        estimate=estimate.mean,
        stderr=estimate.stderr,
        target=target,
        band=estimate.half_width,
        passed=estimate.covers(target),
        n=estimate.n,
        seed=seed,
        details=details,
    )


def martingale_check(
    paths: Any,
    mech: BranchingMechanism,
    t_grid: Sequence[float],
    x: Optional[float] = None,
    multiplier: float = DEFAULT_MULTIPLIER,
    seed: Optional[int] = None,
) -> List[CheckReport]:
    """ Check ``E exp(rho t) Z_t = x`` at every time of *t_grid*.

    Args:
        paths:
            Unconditioned `SimPath` objects, or an ``(n_paths, len(t_grid))``
            array of ``Z`` values already sampled at *t_grid*.
        x (float):
            Starting point, taken from the paths when omitted.

    Raises:
        UnsupportedError: supercritical mechanism.
    """
    require_not_supercritical(mech)
    times = list(t_grid)

    if isinstance(paths, np.ndarray):
        values = paths
        if x is None:
            raise exc.DomainError("x is required with pre-sampled values")
    else:
        values = np.array([[p.value_at(t) for t in times] for p in paths])
        x = paths[0].x if x is None else x

    rho = mech.rho
    reports = []
    for col, t in enumerate(times):
        est = weighted_mean_ci(math.exp(rho * t) * values[:, col], multiplier=multiplier)
        reports.append(check_estimate(f"martingale[t={t:g}]", est, float(x), seed, t=t))

    return reports


def campbell_check(
    atoms: Sequence[ArrayLike],
    f: Callable[[np.ndarray], np.ndarray],
    target: Union[float, ArrayLike],
    weights: Optional[ArrayLike] = None,
    multiplier: float = DEFAULT_MULTIPLIER,
    name: str = 'campbell',
    seed: Optional[int] = None,
) -> CheckReport:
    """ Compare the (weighted) mean of ``sum_n f(r_n)`` per path with its intensity.

    Args:
        atoms:
            Per path, the sizes of the atoms falling in the time window.
        f:
            Bounded test function, vectorized over sizes.
        target:
            ``t * int f dm`` as a number, or a per-path compensator. In the
            latter case the check is on the mean of ``sum f - compensator``
            against 0.

    Raises:
        DomainError: infinite target.
    """
    totals = np.array([
        float(np.sum(f(np.asarray(sizes, dtype=float)))) if len(sizes) else 0.0
        for sizes in atoms
    ])

    target_arr = np.asarray(target, dtype=float)
    if not np.all(np.isfinite(target_arr)):
        raise exc.DomainError("campbell target must be finite")

    if target_arr.ndim == 0:
        est = weighted_mean_ci(totals, weights, multiplier)
        return check_estimate(name, est, float(target_arr), seed)

    if target_arr.shape != totals.shape:
        raise exc.DomainError("need one compensator per path")

    est = weighted_mean_ci(totals - target_arr, weights, multiplier)
    _, w = _as_arrays(totals, weights)
    return check_estimate(
        name, est, 0.0, seed,
        mean_count=float(np.sum(w * totals) / np.sum(w)),
        mean_compensator=float(np.sum(w * target_arr) / np.sum(w)),
    )


@dataclasses.dataclass(frozen=True)
class Box:
    """ ``[t0, t1) x [r0, r1)`` in (time, size) space. """
    t0: float
    t1: float
    r0: float
    r1: float = math.inf

    def count(self, atoms: Sequence[Tuple[float, float]]) -> int:
        return sum(
            1 for t, r in atoms
            if self.t0 <= t < self.t1 and self.r0 <= r < self.r1
        )


def poisson_box_test(
    atoms: Sequence[Sequence[Tuple[float, float]]],
    boxes: Sequence[Box],
    expected: Sequence[float],
    weights: Optional[ArrayLike] = None,
    z_max: float = BOX_MULTIPLIER,
    name: str = 'poisson_boxes',
    seed: Optional[int] = None,
) -> CheckReport:
    """ Per-box count z-scores and pairwise count correlations.

    Passes when every ``|z| <= z_max`` and every pairwise correlation is
    within ``z_max / sqrt(n_eff)``. A box whose counts never vary has no
    correlation with anything.

    Args:
        atoms:
            Per path, the ``(t, r)`` pairs of its atoms.
    """
    exp_arr = np.asarray(expected, dtype=float)
    if len(boxes) != len(exp_arr):
        raise exc.DomainError("need one expected mean per box")
    if not np.all(np.isfinite(exp_arr)) or np.any(exp_arr < 0):
        raise exc.DomainError("expected means must be finite and >= 0")
    if len(boxes) == 0:
        raise exc.DomainError("need at least one box")
    if len(atoms) == 0:
        raise exc.DomainError("empty ensemble")

    counts = np.array([[box.count(path) for box in boxes] for path in atoms], dtype=float)
    _, w = _as_arrays(counts[:, 0], weights)
    n_eff = effective_sample_size(w)

    z_scores = []
    for col, target in enumerate(exp_arr):
        est = weighted_mean_ci(counts[:, col], w)
        if est.stderr > 0:
            z_scores.append((est.mean - target) / est.stderr)
        else:
            z_scores.append(0.0 if abs(est.mean - target) <= 1e-12 else math.inf)

    corr = _weighted_corr(counts, w)
    limit = z_max / math.sqrt(n_eff)
    off_diag = corr[~np.eye(len(boxes), dtype=bool)]
    max_corr = float(np.max(np.abs(off_diag))) if off_diag.size else 0.0
    max_z = float(np.max(np.abs(z_scores)))

    return CheckReport(
        name=name,
        estimate=max_z,
        stderr=math.nan,
        target=0.0,
        band=z_max,
        passed=max_z <= z_max and max_corr <= limit,
        n=len(counts),
        seed=seed,
        details={
            'z_scores': [_json_float(z) for z in z_scores],
            'max_abs_correlation': max_corr,
            'correlation_limit': limit,
            'expected': exp_arr.tolist(),
        },
    )


def _weighted_corr(counts: np.ndarray, w: np.ndarray) -> np.ndarray:
    p = w / np.sum(w)
    centered = counts - p @ counts
    cov = (centered * p[:, None]).T @ centered
    sd = np.sqrt(np.diag(cov))
    nonzero = sd > 0
    corr = np.zeros_like(cov)
    corr[np.ix_(nonzero, nonzero)] = (
        cov[np.ix_(nonzero, nonzero)] / np.outer(sd[nonzero], sd[nonzero])
    )
    return corr


def _as_arrays(
    values: ArrayLike,
    weights: Optional[ArrayLike],
) -> Tuple[np.ndarray, np.ndarray]:
    y = np.asarray(values, dtype=float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)

    if y.shape != w.shape:
        raise exc.DomainError(f"{len(y)} values but {len(w)} weights")
    if np.any(w < 0):
        raise exc.DomainError("weights must be >= 0")

    return y, w


def _estimate(mean: float, stderr: float, n: int, multiplier: float) -> EstimateWithCI:
    return EstimateWithCI(mean, stderr, n, multiplier * stderr, multiplier)


def _json_float(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None
