"""Analytic bounce cycles: apex height and return speed from the launch speed at the wall."""
import math

from dampedbouncer.classical.quantities import LINEAR, DissipationSpec, k_linear
from dampedbouncer.common.errors import DomainError
from dampedbouncer.common.roots import newton_bisect
from dampedbouncer.common.system_configs import PhysicalSystem


def _check_launch(v0: float) -> None:
    if not math.isfinite(v0) or v0 <= 0:
        raise DomainError(f"Launch speed must be > 0, got v0={v0}.")


def bounce_map_quadratic(v0: float, gamma: float, sys: PhysicalSystem) -> tuple[float, float]:
    """K+ = m v0^2 / 2 fixes x_max, x_max fixes K-, K- fixes the return speed v1."""
    _check_launch(v0)
    m, g = sys.m, sys.g
    q = gamma * v0 ** 2 / (m * g)
    # (m / 2 gamma) log1p(q) written to stay finite at gamma = 0
    ratio = 1.0 if q == 0.0 else math.log1p(q) / q
    x_max = v0 ** 2 / (2 * g) * ratio
    v1 = v0 / math.sqrt(1.0 + q)

    return x_max, v1


def bounce_map_linear(v0: float, alpha: float, sys: PhysicalSystem) -> tuple[float, float]:
    """K_alpha(0, v0) = m g x_max on the way up, K_alpha(0, -v1) = m g x_max on the way down."""
    _check_launch(v0)
    m, g = sys.m, sys.g
    x_max = k_linear(0.0, v0, alpha, sys) / (m * g)
    if alpha == 0.0:
        return x_max, v0

    target = m * g * x_max
    terminal = m * g / alpha

    def f(u: float) -> float:
        return k_linear(0.0, -u, alpha, sys) - target

    def df(u: float) -> float:
        return m * u / (1.0 - u / terminal)

    hi = min(v0, terminal * (1.0 - 1e-12))
    v1, _ = newton_bisect(f, df, 0.0, hi)

    return x_max, v1


def bounce_map(v0: float, spec: DissipationSpec, sys: PhysicalSystem) -> tuple[float, float]:
    if spec.law == LINEAR:
        return bounce_map_linear(v0, spec.parameter, sys)
    return bounce_map_quadratic(v0, spec.parameter, sys)


def bounce_sequence(v0: float, spec: DissipationSpec, sys: PhysicalSystem, cycles: int) -> list[tuple[float, float]]:
    """Iterated map: one (x_max, v_return) pair per cycle."""
    sequence = []
    v = v0
    for _ in range(cycles):
        x_max, v = bounce_map(v, spec, sys)
        sequence.append((x_max, v))

    return sequence
