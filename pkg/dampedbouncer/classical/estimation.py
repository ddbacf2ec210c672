"""Recover the drag parameter from a launch speed v0 at the wall and the measured apex x_max."""
import logging
import math
from typing import Callable

from scipy.special import exprel

from dampedbouncer.classical.bounce_maps import bounce_map_linear, bounce_map_quadratic
from dampedbouncer.classical.quantities import LINEAR, SERIES_SWITCH, k_linear
from dampedbouncer.common.errors import ConvergenceError, DomainError
from dampedbouncer.common.roots import newton_bisect
from dampedbouncer.common.system_configs import PhysicalSystem

PARAMETER_MAX = 1e6


def _check_observation(v0: float, x_max: float, sys: PhysicalSystem) -> None:
    if not (math.isfinite(v0) and v0 > 0):
        raise DomainError(f"Launch speed must be > 0, got v0={v0}.")
    conservative = v0 ** 2 / (2 * sys.g)
    if not (math.isfinite(x_max) and 0 < x_max < conservative):
        raise DomainError(
            f"No root: x_max={x_max} must lie in (0, v0^2/2g = {conservative}) for a dissipative bounce."
        )


def _expand_bracket(residual: Callable[[float], float], guess: float, upper: float, name: str) -> float:
    """Double `guess` until the residual changes sign relative to the value at zero."""
    sign_at_zero = residual(0.0) > 0
    hi = max(guess, 1e-12)
    while (residual(hi) > 0) == sign_at_zero:
        if hi >= upper:
            raise ConvergenceError(f"Bracket failure: no sign change for `{name}` below {upper}")
        hi = min(2.0 * hi, upper)

    return hi


def _dk_dalpha(v0: float, alpha: float, sys: PhysicalSystem) -> float:
    m, g = sys.m, sys.g
    w = alpha * v0 / (m * g)
    if abs(w) < SERIES_SWITCH:
        # d/dw sum_{j>=0} (-1)^j w^j / (j + 2)
        series = sum((-1) ** j * j * w ** (j - 1) / (j + 2) for j in range(1, 14))
        return m * v0 ** 2 * series * v0 / (m * g)
    kinetic = m * (m * g / alpha) ** 2 * (w - math.log1p(w))
    return -2.0 * kinetic / alpha + m ** 2 * g * v0 * w / (alpha ** 2 * (1.0 + w))


def estimate_alpha(v0: float, x_max: float, sys: PhysicalSystem, alpha_max: float = PARAMETER_MAX) -> float:
    """Solve K_alpha(0, v0) = m g x_max for alpha."""
    _check_observation(v0, x_max, sys)
    m, g = sys.m, sys.g

    def residual(alpha: float) -> float:
        return k_linear(0.0, v0, alpha, sys) / (m * g) - x_max

    def derivative(alpha: float) -> float:
        return _dk_dalpha(v0, alpha, sys) / (m * g)

    # x_max = v0^2/2g - alpha v0^3 / (3 m g) + O(alpha^2)
    guess = 3.0 * m * g * (v0 ** 2 / (2 * g) - x_max) / v0 ** 3
    hi = _expand_bracket(residual, guess, alpha_max, "alpha")
    alpha, iterations = newton_bisect(residual, derivative, 0.0, hi)
    logging.debug(f"Estimated alpha={alpha!r} in {iterations} iterations, residual {residual(alpha):.3e}.")

    return alpha


def _dexprel(s: float) -> float:
    if abs(s) < SERIES_SWITCH:
        return sum(j * s ** (j - 1) / math.factorial(j + 1) for j in range(1, 14))
    return (s * math.exp(s) - math.expm1(s)) / s ** 2


def estimate_gamma(v0: float, x_max: float, sys: PhysicalSystem, gamma_max: float = PARAMETER_MAX) -> float:
    """Solve m v0^2 / 2 = (m^2 g / 2 gamma)(exp(2 gamma x_max / m) - 1) for gamma."""
    _check_observation(v0, x_max, sys)
    m, g = sys.m, sys.g

    def residual(gamma: float) -> float:
        return m * g * x_max * float(exprel(2 * gamma * x_max / m)) - 0.5 * m * v0 ** 2

    def derivative(gamma: float) -> float:
        return m * g * x_max * _dexprel(2 * gamma * x_max / m) * 2 * x_max / m

    # exprel(s) ~ 1 + s/2
    guess = m * (v0 ** 2 / (2 * g * x_max) - 1.0) / x_max
    hi = _expand_bracket(residual, guess, gamma_max, "gamma")
    gamma, iterations = newton_bisect(residual, derivative, 0.0, hi)
    logging.debug(f"Estimated gamma={gamma!r} in {iterations} iterations, residual {residual(gamma):.3e}.")

    return gamma


def estimation_residual(law: str, v0: float, x_max: float, parameter: float, sys: PhysicalSystem) -> float:
    """Apex mismatch of the recovered parameter, in length units."""
    if law == LINEAR:
        return bounce_map_linear(v0, parameter, sys)[0] - x_max
    return bounce_map_quadratic(v0, parameter, sys)[0] - x_max
