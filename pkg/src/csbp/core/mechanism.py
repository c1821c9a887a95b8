"""
.. module:: csbp.core.mechanism
    :synopsis: Branching mechanisms, Levy measures and their derived quantities.

A branching mechanism is the Laplace exponent of a spectrally positive Levy
process::

    psi(lam) = -a*lam + sigma^2*lam^2/2 + int (exp(-lam*r) - 1 + lam*r*1{r<1}) Pi(dr)

with the killing rate fixed to 0. The jump measure ``Pi`` is one of a closed
set of parametric families, each with exact tails, inverse CDFs and partial
moments so that no quadrature happens inside the simulation loop. The
quadrature versions exist as independent oracles.
"""
import dataclasses
import enum
import math
from typing import Any, Dict, List, Optional, Union

import numpy as np
from scipy import integrate, special

from . import exc


ArrayOrFloat = Union[float, np.ndarray]
CRITICAL_TOL = 1e-12
GEOMETRIC_MAX = 0.97
QUAD_OPTS: Dict[str, Any] = dict(epsabs=0.0, epsrel=1e-12, limit=500)


class LevyKind(str, enum.Enum):
    ZERO = 'zero'
    STABLE = 'stable'
    EXPJUMPS = 'expjumps'


class TailWeight(str, enum.Enum):
    """ Which measure a tail rate/sampler refers to: ``Pi(dr)`` or ``r Pi(dr)``. """
    PLAIN = 'plain'
    SIZE_BIASED = 'size_biased'


class Criticality(str, enum.Enum):
    SUBCRITICAL = 'subcritical'
    CRITICAL = 'critical'
    SUPERCRITICAL = 'supercritical'


@dataclasses.dataclass(frozen=True)
class LevyMeasure:
    """ Jump measure ``Pi`` of a branching mechanism.

    Attributes:
        kind (LevyKind):
            The family.
        k (float):
            Stable intensity scale, density ``k * r^-(alpha+1)``.
        alpha (float):
            Stable index in (1, 2).
        c (float):
            Exponential family rate scale, density ``c * exp(-b*r)``.
        b (float):
            Exponential family decay rate.
    """
    kind: LevyKind = LevyKind.ZERO
    k: float = 0.0
    alpha: float = 0.0
    c: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', LevyKind(self.kind))

        if self.kind == LevyKind.STABLE:
            if not (self.k > 0 and math.isfinite(self.k)):
                raise exc.DomainError(f"stable intensity k must be > 0, got {self.k}")
            if not 1.0 < self.alpha < 2.0:
                raise exc.DomainError(
                    f"stable index alpha must lie in (1, 2), got {self.alpha}"
                )
        elif self.kind == LevyKind.EXPJUMPS:
            if not (self.c > 0 and math.isfinite(self.c)):
                raise exc.DomainError(f"expjumps rate scale c must be > 0, got {self.c}")
            if not (self.b > 0 and math.isfinite(self.b)):
                raise exc.DomainError(f"expjumps decay b must be > 0, got {self.b}")

        if not math.isfinite(self.square_integral_quadrature()):
            raise exc.DomainError("Levy measure does not integrate 1 ^ r^2")

    @classmethod
    def zero(cls) -> 'LevyMeasure':
        return cls(LevyKind.ZERO)

    @classmethod
    def stable(cls, k: float, alpha: float) -> 'LevyMeasure':
        return cls(LevyKind.STABLE, k=k, alpha=alpha)

    @classmethod
    def exponential(cls, c: float, b: float) -> 'LevyMeasure':
        return cls(LevyKind.EXPJUMPS, c=c, b=b)

    @property
    def is_zero(self) -> bool:
        return self.kind == LevyKind.ZERO

    def density(self, r: ArrayOrFloat) -> ArrayOrFloat:
        """ Density of ``Pi`` w.r.t. Lebesgue measure on (0, inf). """
        r = np.asarray(r, dtype=float)
        if self.kind == LevyKind.STABLE:
            power = np.power(r, -(self.alpha + 1.0), where=r > 0, out=np.zeros_like(r))
            out = self.k * power
        elif self.kind == LevyKind.EXPJUMPS:
            out = np.where(r > 0, self.c * np.exp(-self.b * r), 0.0)
        else:
            out = np.zeros_like(r)

        return out if out.ndim else float(out)

    def tail_rate(self, eps: float, weight: TailWeight = TailWeight.PLAIN) -> float:
        """ ``Pi([eps, inf))`` or ``int_eps^inf r Pi(dr)``. """
        if self.kind == LevyKind.STABLE:
            k, al = self.k, self.alpha
            if weight == TailWeight.PLAIN:
                return k * eps ** (-al) / al
            return k * eps ** (1.0 - al) / (al - 1.0)

        elif self.kind == LevyKind.EXPJUMPS:
            c, b = self.c, self.b
            if weight == TailWeight.PLAIN:
                return c / b * math.exp(-b * eps)
            return c * math.exp(-b * eps) * (1.0 + b * eps) / b ** 2

        return 0.0

    def interval_rate(
        self,
        lo: float,
        hi: float = math.inf,
        weight: TailWeight = TailWeight.PLAIN,
    ) -> float:
        """ ``Pi([lo, hi))`` or ``int_[lo, hi) r Pi(dr)`` for ``0 < lo <= hi``. """
        if not 0 < lo <= hi:
            raise exc.DomainError(f"need 0 < lo <= hi, got [{lo}, {hi})")

        upper = 0.0 if math.isinf(hi) else self.tail_rate(hi, weight)
        return self.tail_rate(lo, weight) - upper

    def inverse_cdf(
        self,
        eps: float,
        weight: TailWeight,
        u: ArrayOrFloat,
    ) -> ArrayOrFloat:
        """ Map uniforms in [0, 1) to jump sizes of the measure restricted to [eps, inf).

        Exact for every family. The size biased exponential family inverts
        ``exp(-b r)(1 + b r)`` with the lower branch of Lambert's W.
        """
        u = np.asarray(u, dtype=float)
        q = 1.0 - u        # tail fraction, in (0, 1]

        if self.kind == LevyKind.STABLE:
            power = self.alpha if weight == TailWeight.PLAIN else self.alpha - 1.0
            out = eps * q ** (-1.0 / power)

        elif self.kind == LevyKind.EXPJUMPS:
            b = self.b
            if weight == TailWeight.PLAIN:
                out = eps - np.log(q) / b
            else:
                y0 = 1.0 + b * eps
                arg = -q * y0 * math.exp(-y0)
                out = (-special.lambertw(arg, k=-1).real - 1.0) / b
                out = np.maximum(out, eps)

        else:
            raise exc.DomainError("the zero measure has no jumps")

        return out if out.ndim else float(out)

    def compensator(self, eps: float) -> float:
        """ ``int_[eps, 1) r Pi(dr)``, the drift compensating the kept small jumps. """
        if eps >= 1.0:
            return 0.0

        if self.kind == LevyKind.STABLE:
            k, al = self.k, self.alpha
            return k * (eps ** (1.0 - al) - 1.0) / (al - 1.0)

        elif self.kind == LevyKind.EXPJUMPS:
            c, b = self.c, self.b
            upper = math.exp(-b * eps) * (1.0 + b * eps)
            lower = math.exp(-b) * (1.0 + b)
            return c * (upper - lower) / b ** 2

        return 0.0

    def truncation_drift(self, cut: float) -> float:
        """ `compensator` extended to ``cut > 1`` as ``-int_[1, cut) r Pi(dr)``.

        Subtracting it from ``a`` gives the drift of a path that only keeps the
        jumps ``>= cut``: dropped jumps above 1 are uncompensated in psi, so
        their mean comes back as drift.
        """
        if cut <= 1.0:
            return self.compensator(cut)
        if self.is_zero:
            return 0.0
        return -self.interval_rate(1.0, cut, TailWeight.SIZE_BIASED)

    def state_cutoff(self, eps: float, z: float) -> float:
        """ Smallest branching jump kept while the state is *z*.

        Stable jumps from a state *z* scale like ``z^(1/alpha)``. Above
        ``z = 1`` the cutoff scales with them, ``eps * z^(1/alpha)``, which
        keeps the jump rate ``z * Pi([cut, inf))`` at its ``z = 1`` value.
        Other families always use *eps*.
        """
        if self.kind == LevyKind.STABLE and z > 1.0:
            return eps * z ** (1.0 / self.alpha)
        return eps

    def small_size_biased_mass(self, eps: float) -> float:
        """ ``int_(0, eps) r^2 Pi(dr)``: mean rate of immigration below the cutoff. """
        if self.kind == LevyKind.STABLE:
            return self.k * eps ** (2.0 - self.alpha) / (2.0 - self.alpha)

        elif self.kind == LevyKind.EXPJUMPS:
            return 2.0 * self.c / self.b ** 3 * float(special.gammainc(3.0, self.b * eps))

        return 0.0

    def large_jump_mean(self) -> float:
        """ ``int_[1, inf) r Pi(dr)`` """
        if self.kind == LevyKind.ZERO:
            return 0.0
        return self.tail_rate(1.0, TailWeight.SIZE_BIASED)

    def second_moment(self) -> float:
        """ ``int r^2 Pi(dr)``, infinite for the stable family. """
        if self.kind == LevyKind.STABLE:
            return math.inf
        elif self.kind == LevyKind.EXPJUMPS:
            return 2.0 * self.c / self.b ** 3
        return 0.0

    def laplace_integral(self, lam: ArrayOrFloat) -> ArrayOrFloat:
        """ ``int (exp(-lam r) - 1 + lam r 1{r<1}) Pi(dr)`` in closed form. """
        lam = np.asarray(lam, dtype=float)

        if self.kind == LevyKind.STABLE:
            k, al = self.k, self.alpha
            out = k * special.gamma(-al) * lam ** al - lam * k / (al - 1.0)

        elif self.kind == LevyKind.EXPJUMPS:
            c, b = self.c, self.b
            out = -c * lam / (b * (b + lam)) + lam * c * _exp_first_moment_below_one(b)

        else:
            out = np.zeros_like(lam)

        return out if out.ndim else float(out)

    def laplace_integral_prime(self, lam: ArrayOrFloat) -> ArrayOrFloat:
        """ ``int r (1{r<1} - exp(-lam r)) Pi(dr)`` in closed form. """
        lam = np.asarray(lam, dtype=float)

        if self.kind == LevyKind.STABLE:
            k, al = self.k, self.alpha
            out = k * al * special.gamma(-al) * lam ** (al - 1.0) - k / (al - 1.0)

        elif self.kind == LevyKind.EXPJUMPS:
            c, b = self.c, self.b
            out = -c / (b + lam) ** 2 + c * _exp_first_moment_below_one(b)

        else:
            out = np.zeros_like(lam)

        return out if out.ndim else float(out)

    def subordinator_exponent(self, lam: ArrayOrFloat) -> ArrayOrFloat:
        """ ``int (1 - exp(-lam r)) r Pi(dr)``, the immigration subordinator exponent. """
        lam = np.asarray(lam, dtype=float)

        if self.kind == LevyKind.STABLE:
            k, al = self.k, self.alpha
            out = k * special.gamma(2.0 - al) / (al - 1.0) * lam ** (al - 1.0)

        elif self.kind == LevyKind.EXPJUMPS:
            c, b = self.c, self.b
            out = c * (1.0 / b ** 2 - 1.0 / (b + lam) ** 2)

        else:
            out = np.zeros_like(lam)

        return out if out.ndim else float(out)

    def square_integral_quadrature(self) -> float:
        """ ``int (1 ^ r^2) Pi(dr)`` by adaptive quadrature. """
        if self.is_zero:
            return 0.0

        inner, _ = integrate.quad(lambda r: r * r * self.density(r), 0.0, 1.0, limit=200)
        outer, _ = integrate.quad(self.density, 1.0, np.inf, limit=200)
        return inner + outer

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == LevyKind.STABLE:
            return {'kind': 'stable', 'k': self.k, 'alpha': self.alpha}
        elif self.kind == LevyKind.EXPJUMPS:
            return {'kind': 'expjumps', 'c': self.c, 'b': self.b}
        return {'kind': 'zero'}

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> 'LevyMeasure':
        kind = values.get('kind', 'zero')
        if kind == 'stable':
            return cls.stable(float(values['k']), float(values['alpha']))
        elif kind == 'expjumps':
            return cls.exponential(float(values['c']), float(values['b']))
        elif kind == 'zero':
            return cls.zero()

        raise exc.DomainError(f"unknown Levy measure kind '{kind}'")


@dataclasses.dataclass(frozen=True)
class BranchingMechanism:
    """ The triplet ``(a, sigma, Pi)`` with no killing term.

    Immutable, so one instance can be shared by every simulation worker.
    """
    a: float
    sigma: float
    levy: LevyMeasure = dataclasses.field(default_factory=LevyMeasure.zero)

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise exc.DomainError(f"a must be finite, got {self.a}")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise exc.DomainError(f"sigma must be >= 0, got {self.sigma}")

    @classmethod
    def feller(cls, a: float, sigma: float) -> 'BranchingMechanism':
        """ Continuous (no jumps) mechanism ``-a lam + sigma^2 lam^2 / 2``. """
        return cls(a=a, sigma=sigma)

    @classmethod
    def stable(cls, alpha: float, scale: float = 1.0) -> 'BranchingMechanism':
        """ Pure jump mechanism with ``psi(lam) = scale * lam^alpha`` exactly.

        The drift ``a`` cancels the linear term the ``1{r<1}`` compensation
        leaves behind.
        """
        k = scale / float(special.gamma(-alpha))
        return cls(a=-k / (alpha - 1.0), sigma=0.0, levy=LevyMeasure.stable(k, alpha))

    @property
    def rho(self) -> float:
        return psi_prime(self, 0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {'a': self.a, 'sigma': self.sigma, 'levy': self.levy.to_dict()}

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> 'BranchingMechanism':
        return cls(
            a=float(values.get('a', 0.0)),
            sigma=float(values.get('sigma', 0.0)),
            levy=LevyMeasure.from_dict(values.get('levy', {'kind': 'zero'})),
        )


@dataclasses.dataclass
class RegularityReport:
    conservative: bool
    # None when the question does not apply (supercritical mechanisms).
    almost_sure_extinction: Optional[bool]
    convex: bool
    extinction_integral: Optional[float] = None
    threshold: Optional[float] = None


def psi_eval(mech: BranchingMechanism, lam: ArrayOrFloat) -> ArrayOrFloat:
    """ Evaluate the branching mechanism at ``lam >= 0``.

    Examples:

        >>> from csbp.core.mechanism import BranchingMechanism, psi_eval
        >>> psi_eval(BranchingMechanism.feller(a=-1, sigma=2 ** 0.5), 1.0)
        2.0...
    """
    lam = _check_nonneg(lam, 'lambda')
    diffusion = 0.5 * mech.sigma ** 2 * lam ** 2
    return -mech.a * lam + diffusion + mech.levy.laplace_integral(lam)


def psi_prime(mech: BranchingMechanism, lam: ArrayOrFloat) -> ArrayOrFloat:
    """ Derivative of the branching mechanism, ``psi'(0+)`` at ``lam == 0``.

    Raises:
        DomainError: for negative ``lam`` or an infinite first moment of the
            large jumps.
    """
    lam = _check_nonneg(lam, 'lambda')
    if not math.isfinite(mech.levy.large_jump_mean()):
        raise exc.DomainError("first moment infinite: int_1^inf r Pi(dr) diverges")

    return -mech.a + mech.sigma ** 2 * lam + mech.levy.laplace_integral_prime(lam)


def classify(mech: BranchingMechanism) -> Criticality:
    rho = psi_prime(mech, 0.0)

    if abs(rho) <= CRITICAL_TOL:
        return Criticality.CRITICAL
    elif rho > 0:
        return Criticality.SUBCRITICAL
    else:
        return Criticality.SUPERCRITICAL


def phi_eval(mech: BranchingMechanism, theta: ArrayOrFloat) -> ArrayOrFloat:
    """ Immigration mechanism of the Q-process: ``psi'(theta) - rho``.

    Computed as ``sigma^2 theta + int (1 - exp(-theta r)) r Pi(dr)`` which is
    the same quantity without the cancellation of two large terms.
    """
    require_not_supercritical(mech)
    theta = _check_nonneg(theta, 'theta')
    return mech.sigma ** 2 * theta + mech.levy.subordinator_exponent(theta)


def levy_tail_rate(
    levy: LevyMeasure,
    eps: float,
    weight: TailWeight = TailWeight.PLAIN,
) -> float:
    if not eps > 0:
        raise exc.DomainError(f"cutoff eps must be > 0, got {eps}")

    return levy.tail_rate(eps, TailWeight(weight))


def sample_levy_jump(
    levy: LevyMeasure,
    eps: float,
    weight: TailWeight,
    rng: np.random.Generator,
    size: Optional[int] = None,
) -> ArrayOrFloat:
    """ Draw jump sizes ``>= eps`` from ``Pi`` or ``r Pi`` restricted to [eps, inf). """
    if levy.is_zero:
        raise exc.DomainError("no jumps: the Levy measure is zero")

    if not eps > 0:
        raise exc.DomainError(f"cutoff eps must be > 0, got {eps}")

    return levy.inverse_cdf(eps, TailWeight(weight), rng.random(size))


def check_regularity(mech: BranchingMechanism) -> RegularityReport:
    """ Check the standing assumptions of the conditioned theory.

    ``conservative`` uses the sufficient condition ``psi(0) = 0`` and finite
    ``psi'(0+)``. Extinction requires ``int^inf d xi / psi(xi) < inf``,
    detected by integrating decade by decade until the contributions vanish
    (convergent) or stop shrinking (divergent).
    """
    try:
        rho = psi_prime(mech, 0.0)
        conservative = psi_eval(mech, 0.0) == 0.0 and math.isfinite(rho)
    except exc.DomainError:
        conservative = False
        rho = math.nan

    convex = is_convex(mech)

    if not conservative or classify(mech) == Criticality.SUPERCRITICAL:
        return RegularityReport(conservative, None, convex)

    threshold = _positive_threshold(mech)
    if threshold is None:
        return RegularityReport(conservative, False, convex)

    integral = _extinction_integral(mech, threshold)
    return RegularityReport(
        conservative=conservative,
        almost_sure_extinction=integral is not None,
        convex=convex,
        extinction_integral=integral,
        threshold=threshold,
    )


def is_convex(mech: BranchingMechanism, grid: Optional[np.ndarray] = None) -> bool:
    """ Midpoint convexity of psi on a log grid. """
    if grid is None:
        grid = np.concatenate([[0.0], np.logspace(-3, 3, 25)])

    x, y = np.meshgrid(grid, grid, indexing='ij')
    mask = x < y
    x, y = x[mask], y[mask]
    psi_y = psi_eval(mech, y)
    lhs = psi_eval(mech, 0.5 * (x + y))
    rhs = 0.5 * (psi_eval(mech, x) + psi_y) + 1e-9 * (1.0 + np.abs(psi_y))
    return bool(np.all(lhs <= rhs))


def require_not_supercritical(mech: BranchingMechanism) -> None:
    if classify(mech) == Criticality.SUPERCRITICAL:
        raise exc.UnsupportedError(
            f"supercritical mechanism (rho={mech.rho:.6g}) cannot be conditioned"
        )


def psi_quadrature(mech: BranchingMechanism, lam: float) -> float:
    """ ``psi(lam)`` with the jump integral done by adaptive quadrature. """
    lam = float(_check_nonneg(lam, 'lambda'))
    levy = mech.levy

    def small(r):
        return _compensated_exp(lam * r) * levy.density(r)

    def large(r):
        return math.expm1(-lam * r) * levy.density(r)

    jumps = 0.0
    if not levy.is_zero:
        jumps = integrate.quad(small, 0.0, 1.0, **QUAD_OPTS)[0]
        jumps += integrate.quad(large, 1.0, np.inf, **QUAD_OPTS)[0]

    return -mech.a * lam + 0.5 * mech.sigma ** 2 * lam ** 2 + jumps


def psi_prime_quadrature(mech: BranchingMechanism, lam: float) -> float:
    """ ``psi'(lam)`` with the jump integral done by adaptive quadrature. """
    lam = float(_check_nonneg(lam, 'lambda'))
    levy = mech.levy

    def small(r):
        return -r * math.expm1(-lam * r) * levy.density(r)

    def large(r):
        return -r * math.exp(-lam * r) * levy.density(r)

    jumps = 0.0
    if not levy.is_zero:
        jumps = integrate.quad(small, 0.0, 1.0, **QUAD_OPTS)[0]
        jumps += integrate.quad(large, 1.0, np.inf, **QUAD_OPTS)[0]

    return -mech.a + mech.sigma ** 2 * lam + jumps


def _compensated_exp(x: float) -> float:
    """ ``exp(-x) - 1 + x`` without cancellation for small x. """
    if x < 1e-3:
        return x * x * (0.5 - x / 6.0 + x * x / 24.0)
    return math.expm1(-x) + x


def _exp_first_moment_below_one(b: float) -> float:
    """ ``int_0^1 r exp(-b r) dr`` """
    return (1.0 - math.exp(-b) * (1.0 + b)) / b ** 2


def _check_nonneg(value: ArrayOrFloat, name: str) -> ArrayOrFloat:
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise exc.DomainError(f"{name} must be >= 0, got {value}")

    return arr if arr.ndim else float(arr)


def _positive_threshold(mech: BranchingMechanism) -> Optional[float]:
    lam = 1.0
    for _ in range(64):
        if psi_eval(mech, lam) > 0:
            return lam
        lam *= 2.0

    return None


def _extinction_integral(
    mech: BranchingMechanism,
    threshold: float,
    max_decades: int = 60,
) -> Optional[float]:
    """ ``int_threshold^inf d xi / psi(xi)``, ``None`` when it diverges.

    Stops when a decade adds nothing, or when the contributions shrink by a
    steady factor ``q < GEOMETRIC_MAX``, adding the geometric tail.
    """
    total = 0.0
    prev = math.inf
    ratios: List[float] = []

    for decade in range(max_decades):
        lo = threshold * 10.0 ** decade
        part, _ = integrate.quad(
            lambda s: lo * math.exp(s) / psi_eval(mech, lo * math.exp(s)),
            0.0, math.log(10.0),
            epsabs=0.0, epsrel=1e-10,
        )
        total += part

        if decade >= 3 and part <= 1e-10 * total and part < 0.9 * prev:
            return total

        if math.isfinite(prev) and prev > 0:
            ratios.append(part / prev)
        if len(ratios) >= 3:
            q = ratios[-1]
            steady = max(abs(q - ratios[-2]), abs(ratios[-2] - ratios[-3])) <= 1e-4
            if q < GEOMETRIC_MAX and steady:
                return total + part * q / (1.0 - q)

        prev = part

    return None
