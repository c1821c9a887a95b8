"""
.. module:: csbp.core.laplace
    :synopsis: The backward ODE for u_t(theta) and the Laplace transform oracles.

``u_t(theta)`` solves ``du/dt = -psi(u)``, ``u_0 = theta`` and gives

* ``E_x exp(-theta Z_t) = exp(-x u_t(theta))`` for the CSBP, and
* ``E_x^up exp(-theta Z_t) = exp(-x u_t(theta) - int_0^t phi(u_s(theta)) ds)``
  for the process conditioned on non-extinction.

Every Monte Carlo check in the package compares against these numbers.
"""
import dataclasses
import enum
import math
from typing import Any, List, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, optimize

from . import exc, log
from .mechanism import (
    BranchingMechanism,
    check_regularity,
    phi_eval,
    psi_eval,
    require_not_supercritical,
)


RTOL = 1e-10
ATOL = 1e-14
GAUSS_NODES = 8
LADDER_EXPONENTS = tuple(range(2, 13))
LADDER_RTOL = 1e-6


class UFamily(str, enum.Enum):
    QUADRATIC = 'quadratic'
    STABLE = 'stable'
    LINEAR_QUADRATIC = 'linear_quadratic'


@dataclasses.dataclass
class UCurve:
    """ ``u_t(theta)`` sampled on a time grid.

    Attributes:
        theta (float):
            Initial value ``u_0``.
        times (np.ndarray):
            Strictly increasing time grid.
        values (np.ndarray):
            ``u`` at each time, clamped at 0.
        tolerance (float):
            Relative local error requested from the integrator.
        solution (Any):
            The integrator's dense output, callable on ``[0, times[-1]]``.
    """
    theta: float
    times: np.ndarray
    values: np.ndarray
    tolerance: float
    solution: Any = dataclasses.field(default=None, repr=False, compare=False)
    step_times: Optional[np.ndarray] = dataclasses.field(
        default=None, repr=False, compare=False
    )

    def at(self, t: float) -> float:
        if self.solution is None:
            return self.theta
        return max(float(self.solution(t)[0]), 0.0)


@dataclasses.dataclass
class ExtinctionLimit:
    """ ``u_t(inf)`` with the theta ladder used to compute it. """
    t: float
    value: float
    ladder: List[float]
    ladder_values: List[float]
    extrapolants: List[float]


def solve_u(
    mech: BranchingMechanism,
    theta: float,
    t_grid: Sequence[float],
    rtol: float = RTOL,
) -> UCurve:
    """ Integrate ``du/dt = -psi(u)`` from ``u_0 = theta`` and sample it on *t_grid*.

    Uses the embedded 8(5,3) Dormand-Prince pair with dense output. Tiny
    negative undershoots are clamped to 0.

    Raises:
        DomainError: negative theta or a grid that is not strictly increasing
            from a non-negative start.
        NumericalError: the integrator gave up (step size underflow).
    """
    require_not_supercritical(mech)
    if not theta >= 0:
        raise exc.DomainError(f"theta must be >= 0, got {theta}")

    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise exc.DomainError("t_grid must be a non-empty 1-d sequence")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise exc.DomainError("t_grid must be strictly increasing and start at t >= 0")

    t_end = float(times[-1])
    if theta == 0 or t_end == 0:
        return UCurve(theta, times, np.full_like(times, theta), rtol)

    def rhs(t, u):
        return [-psi_eval(mech, max(u[0], 0.0))]

    sol = integrate.solve_ivp(
        rhs,
        (0.0, t_end),
        [float(theta)],
        method='DOP853',
        rtol=rtol,
        atol=ATOL,
        dense_output=True,
    )
    if not sol.success:
        raise exc.NumericalError(
            f"u_t({theta}) integration failed at t={sol.t[-1]:.6g} "
            f"after {sol.nfev} evaluations: {sol.message}"
        )

    values = np.maximum(sol.sol(times)[0], 0.0)
    values[times == 0] = theta
    log.dbg("solve_u theta={} t_end={} steps={}", theta, t_end, len(sol.t))

    # Step points double as quadrature panels for the immigration integral.
    return UCurve(theta, times, values, rtol, solution=sol.sol, step_times=sol.t)


def closed_form_u(
    family: UFamily,
    theta: float,
    t: float,
    *,
    alpha: Optional[float] = None,
    linear: Optional[float] = None,
    quadratic: float = 1.0,
) -> float:
    """ Exact ``u_t(theta)`` for mechanisms with a separable closed form.

    * ``quadratic``: ``psi = lam^2``
    * ``stable``: ``psi = lam^alpha``, alpha in (1, 2]
    * ``linear_quadratic``: ``psi = linear*lam + quadratic*lam^2``

    Examples:

        >>> from csbp.core.laplace import closed_form_u
        >>> closed_form_u('quadratic', 1.0, 1.0)
        0.5
    """
    family = UFamily(family)

    if theta == 0:
        return 0.0

    if family == UFamily.QUADRATIC:
        return theta / (1.0 + theta * t)

    elif family == UFamily.STABLE:
        if alpha is None or not 1.0 < alpha <= 2.0:
            raise exc.DomainError(f"stable family needs alpha in (1, 2], got {alpha}")
        power = 1.0 - alpha
        return (theta ** power - power * t) ** (1.0 / power)

    elif family == UFamily.LINEAR_QUADRATIC:
        if linear is None or linear <= 0:
            raise exc.DomainError("linear_quadratic family needs linear > 0")
        decay = math.exp(-linear * t)
        return linear * theta * decay / (linear + quadratic * theta * (1.0 - decay))

    raise exc.DomainError(f"unsupported family {family}")


def csbp_laplace(mech: BranchingMechanism, x: float, theta: float, t: float) -> float:
    """ ``E_x exp(-theta Z_t) = exp(-x u_t(theta))`` """
    _check_args(x, theta, t)
    u = solve_u(mech, theta, [0.0, t] if t > 0 else [0.0]).values[-1]
    return math.exp(-x * u)


def qprocess_laplace(mech: BranchingMechanism, x: float, theta: float, t: float) -> float:
    """ Laplace transform of the Q-process, a CBI with ``phi = psi' - rho``. """
    _check_args(x, theta, t)
    if t == 0 or theta == 0:
        return math.exp(-x * theta)

    curve = solve_u(mech, theta, [0.0, t])
    return math.exp(-x * curve.values[-1] - immigration_integral(mech, curve, t))


def immigration_integral(mech: BranchingMechanism, curve: UCurve, t: float) -> float:
    """ ``int_0^t phi(u_s(theta)) ds`` by composite Gauss-Legendre on the dense output.

    Panels are the integrator's own steps, where the interpolant is smooth.
    """
    if t == 0 or curve.solution is None:
        return 0.0

    knots = np.asarray(curve.step_times, dtype=float)
    knots = np.unique(np.concatenate([knots[knots < t], [0.0, t]]))
    nodes, weights = leggauss(GAUSS_NODES)

    lo, hi = knots[:-1], knots[1:]
    half = 0.5 * (hi - lo)
    points = (0.5 * (hi + lo))[:, None] + half[:, None] * nodes[None, :]
    u = np.maximum(curve.solution(points.ravel())[0], 0.0)
    phi = np.asarray(phi_eval(mech, u)).reshape(points.shape)
    return float(np.sum(half[:, None] * weights[None, :] * phi))


def laplace_table(
    mech: BranchingMechanism,
    x: float,
    thetas: Sequence[float],
    times: Sequence[float],
) -> List[dict]:
    """ Rows of ``t, theta, u, csbp_laplace, qprocess_laplace`` for every pair. """
    rows = []
    grid = np.unique(np.concatenate([[0.0], np.asarray(times, dtype=float)]))

    for theta in thetas:
        curve = solve_u(mech, theta, grid)
        for t, u in zip(grid, curve.values):
            if t not in times:
                continue
            imm = immigration_integral(mech, curve, t) if theta > 0 else 0.0
            rows.append({
                't': float(t),
                'theta': float(theta),
                'u': float(u),
                'csbp_laplace': math.exp(-x * u),
                'qprocess_laplace': math.exp(-x * u - imm),
            })

    return rows


def extinction_u(mech: BranchingMechanism, t: float) -> ExtinctionLimit:
    """ ``u_t(inf) = lim u_t(theta)`` along a geometric theta ladder.

    The error of ``u_t(theta)`` decays like a power of theta, so consecutive
    rungs form a near geometric sequence and Aitken's delta-squared removes
    the leading term. Converged once two consecutive extrapolants agree to
    ``LADDER_RTOL``.
    """
    if not t > 0:
        raise exc.DomainError(f"t must be > 0, got {t}")

    ladder: List[float] = []
    values: List[float] = []
    extrapolants: List[float] = []

    for exponent in LADDER_EXPONENTS:
        theta = 10.0 ** exponent
        ladder.append(theta)
        values.append(float(solve_u(mech, theta, [0.0, t]).values[-1]))

        if len(values) < 3:
            continue

        extrapolants.append(_aitken(*values[-3:]))
        if len(extrapolants) >= 2:
            last, prev = extrapolants[-1], extrapolants[-2]
            if abs(last - prev) <= LADDER_RTOL * abs(last):
                return ExtinctionLimit(t, last, ladder, values, extrapolants)

    raise exc.NumericalError(
        f"u_t(inf) did not converge at t={t}: extrapolants {extrapolants[-3:]}"
    )


def extinction_u_from_integral(mech: BranchingMechanism, t: float) -> float:
    """ ``u_t(inf)`` as the root of ``int_v^inf d xi / psi(xi) = t``. """
    if not t > 0:
        raise exc.DomainError(f"t must be > 0, got {t}")

    def remaining(log_v: float) -> float:
        v = math.exp(log_v)
        value, _ = integrate.quad(
            lambda s: v * math.exp(s) / psi_eval(mech, v * math.exp(s)),
            0.0, np.inf,
            epsabs=0.0, epsrel=1e-12, limit=500,
        )
        return value - t

    lo, hi = -5.0, 5.0
    while remaining(lo) < 0:
        lo -= 5.0
    while remaining(hi) > 0:
        hi += 5.0

    return math.exp(optimize.brentq(remaining, lo, hi, xtol=1e-14, rtol=1e-13))


def survival_probability(mech: BranchingMechanism, x: float, t: float) -> float:
    """ ``P_x(T > t) = 1 - exp(-x u_t(inf))`` """
    if not x >= 0:
        raise exc.DomainError(f"x must be >= 0, got {x}")
    if not check_regularity(mech).almost_sure_extinction:
        raise exc.DomainError("extinction is not almost sure for this mechanism")

    if x == 0:
        return 0.0
    if t == 0:
        return 1.0

    return -math.expm1(-x * extinction_u(mech, t).value)


def csbp_mean(mech: BranchingMechanism, x: float, t: float) -> float:
    """ ``E_x Z_t = x exp(-rho t)`` """
    return x * math.exp(-mech.rho * t)


def qprocess_mean(mech: BranchingMechanism, x: float, t: float) -> float:
    """ Mean of the Q-process, ``m' = -rho m + sigma^2 + int r^2 Pi(dr)``.

    Infinite when the jump measure has no second moment.
    """
    require_not_supercritical(mech)
    source = mech.sigma ** 2 + mech.levy.second_moment()
    rho = mech.rho

    if not math.isfinite(source):
        return math.inf
    if abs(rho) < 1e-12:
        return x + source * t

    return x * math.exp(-rho * t) - source * math.expm1(-rho * t) / rho


def _aitken(u0: float, u1: float, u2: float) -> float:
    d1, d2 = u1 - u0, u2 - u1
    denom = d2 - d1
    if denom == 0.0:
        return u2
    return u2 - d2 * d2 / denom


def _check_args(x: float, theta: float, t: float) -> None:
    if not x > 0:
        raise exc.DomainError(f"x must be > 0, got {x}")
    if not theta >= 0:
        raise exc.DomainError(f"theta must be >= 0, got {theta}")
    if not t >= 0:
        raise exc.DomainError(f"t must be >= 0, got {t}")
