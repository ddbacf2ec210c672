"""Constants of motion, Lagrangians, generalized momenta and Hamiltonians of the damped bouncer.

Linear drag:     m dv/dt = -m g - alpha v
Quadratic drag:  m dv/dt = -m g - gamma v |v|

Every quantity has an exact form and a second-order series form in the
dissipation parameter. The exact linear forms switch to a long power series
when |alpha v / (m g)| is small, where the logarithms cancel.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

from scipy.special import exprel

from dampedbouncer.common.errors import ConfigError, DomainError
from dampedbouncer.common.system_configs import PhysicalSystem

LINEAR = "linear"
QUADRATIC = "quadratic"
LAWS = (LINEAR, QUADRATIC)

EXACT = "exact"
SERIES = "series"
FORMULATIONS = (EXACT, SERIES)

SERIES_SWITCH = 1e-2
_SERIES_TERMS = 14


class Branch(str, Enum):
    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.UP else -1

    @classmethod
    def for_velocity(cls, v: float) -> 'Branch':
        return cls.UP if v >= 0 else cls.DOWN


@dataclass(frozen=True)
class DissipationSpec:
    law: str
    parameter: float
    formulation: str = EXACT
    branch: Branch | None = None

    def __post_init__(self) -> None:
        if self.law not in LAWS:
            raise ConfigError(f"Dissipation law `{self.law}` not supported!")
        if self.formulation not in FORMULATIONS:
            raise ConfigError(f"Formulation `{self.formulation}` not supported!")
        if not math.isfinite(self.parameter) or self.parameter < 0:
            raise ConfigError(f"Dissipation parameter must be finite and >= 0, got {self.parameter}.")
        if self.branch is not None and self.law == LINEAR:
            raise ConfigError("A velocity branch only applies to the quadratic law.")
        if self.branch is not None and not isinstance(self.branch, Branch):
            object.__setattr__(self, 'branch', Branch(self.branch))

    @property
    def symbol(self) -> str:
        return "alpha" if self.law == LINEAR else "gamma"


def _check_series(name: str, smallness: float) -> None:
    if smallness >= 1.0:
        logging.warning(f"Series form of `{name}` used outside its validity range (smallness {smallness:.3g} >= 1).")


def _check_branch(branch: Branch, v: float) -> int:
    branch = Branch(branch)
    if (branch is Branch.UP and v < 0) or (branch is Branch.DOWN and v > 0):
        raise DomainError(f"Branch `{branch.value}` inconsistent with velocity sign (v={v}).")
    return branch.sign


def _linear_w(v: float, alpha: float, sys: PhysicalSystem) -> float:
    w = alpha * v / (sys.m * sys.g)
    if 1.0 + w <= 0.0:
        raise DomainError(
            f"1 + alpha v/(m g) = {1.0 + w} <= 0: velocity v={v} beyond the terminal velocity {-sys.m * sys.g / alpha}."
        )
    return w


def _series(w: float, coefficient) -> float:
    total = 0.0
    power = 1.0
    for j in range(_SERIES_TERMS):
        total += coefficient(j) * power
        power *= w
    return total


# linear law

def k_linear(x: float, v: float, alpha: float, sys: PhysicalSystem, formulation: str = EXACT) -> float:
    m, g = sys.m, sys.g
    if formulation == SERIES:
        _check_series("k_linear", abs(alpha * v / (m * g)))
        return 0.5 * m * v ** 2 + m * g * x - alpha * v ** 3 / (3 * g) + alpha ** 2 * v ** 4 / (4 * m * g ** 2)

    w = _linear_w(v, alpha, sys)
    if abs(w) < SERIES_SWITCH:
        # w - log1p(w) = sum_{j>=2} (-1)^j w^j / j
        return m * v ** 2 * _series(w, lambda j: (-1) ** j / (j + 2)) + m * g * x
    return m * (m * g / alpha) ** 2 * (w - math.log1p(w)) + m * g * x


def l_linear(x: float, v: float, alpha: float, sys: PhysicalSystem, formulation: str = EXACT) -> float:
    m, g = sys.m, sys.g
    if formulation == SERIES:
        _check_series("l_linear", abs(alpha * v / (m * g)))
        return 0.5 * m * v ** 2 - m * g * x - alpha * v ** 3 / (6 * g) + alpha ** 2 * v ** 4 / (12 * m * g ** 2)

    w = _linear_w(v, alpha, sys)
    if abs(w) < SERIES_SWITCH:
        # (1 + w) log1p(w) - w = sum_{j>=2} (-1)^j w^j / (j (j - 1))
        return m * v ** 2 * _series(w, lambda j: (-1) ** j / ((j + 2) * (j + 1))) - m * g * x
    return m * (m * g / alpha) ** 2 * ((1.0 + w) * math.log1p(w) - w) - m * g * x


def p_linear(v: float, alpha: float, sys: PhysicalSystem, formulation: str = EXACT) -> float:
    m, g = sys.m, sys.g
    if formulation == SERIES:
        _check_series("p_linear", abs(alpha * v / (m * g)))
        return m * v - alpha * v ** 2 / (2 * g) + alpha ** 2 * v ** 3 / (3 * m * g)

    w = _linear_w(v, alpha, sys)
    if abs(w) < SERIES_SWITCH:
        return m * v * _series(w, lambda j: (-1) ** j / (j + 1))
    return m ** 2 * g / alpha * math.log1p(w)


def v_linear(p: float, alpha: float, sys: PhysicalSystem) -> float:
    """Velocity of the exact linear-law momentum p (inverse of p_linear)."""
    m, g = sys.m, sys.g
    u = alpha * p / (m ** 2 * g)
    return p / m * float(exprel(u))


def h_linear(x: float, p: float, alpha: float, sys: PhysicalSystem, formulation: str = EXACT) -> float:
    m, g = sys.m, sys.g
    if formulation == SERIES:
        _check_series("h_linear", abs(alpha * p / (m ** 2 * g)))
        return p ** 2 / (2 * m) + m * g * x + alpha * p ** 3 / (6 * m ** 3 * g) \
            + alpha ** 2 * p ** 4 / (24 * m ** 5 * g ** 2)

    u = alpha * p / (m ** 2 * g)
    if abs(u) < SERIES_SWITCH:
        # expm1(u) - u = sum_{j>=2} u^j / j!
        return p ** 2 / m * _series(u, lambda j: 1.0 / math.factorial(j + 2)) + m * g * x
    return m * (m * g / alpha) ** 2 * (math.expm1(u) - u) + m * g * x


# quadratic law

def k_quadratic(
        x: float, v: float, gamma: float, branch: Branch, sys: PhysicalSystem, formulation: str = EXACT
) -> float:
    m, g = sys.m, sys.g
    sigma = _check_branch(branch, v)
    if formulation == SERIES:
        _check_series("k_quadratic", max(gamma * x / m, gamma * v ** 2 / (m * g)))
        return 0.5 * m * v ** 2 + m * g * x + sigma * gamma * (v ** 2 * x + g * x ** 2) \
            + gamma ** 2 * (v ** 2 * x ** 2 / m + 2 * g * x ** 3 / (3 * m))

    s = sigma * 2 * gamma * x / m
    return 0.5 * m * v ** 2 * math.exp(s) + m * g * x * float(exprel(s))


def l_quadratic(
        x: float, v: float, gamma: float, branch: Branch, sys: PhysicalSystem, formulation: str = EXACT
) -> float:
    m, g = sys.m, sys.g
    sigma = _check_branch(branch, v)
    if formulation == SERIES:
        _check_series("l_quadratic", max(gamma * x / m, gamma * v ** 2 / (m * g)))
        return 0.5 * m * v ** 2 - m * g * x + sigma * gamma * (v ** 2 * x - g * x ** 2) \
            + gamma ** 2 * (v ** 2 * x ** 2 / m - 2 * g * x ** 3 / (3 * m))

    s = sigma * 2 * gamma * x / m
    return 0.5 * m * v ** 2 * math.exp(s) - m * g * x * float(exprel(s))


def p_quadratic(
        x: float, v: float, gamma: float, branch: Branch, sys: PhysicalSystem, formulation: str = EXACT
) -> float:
    m = sys.m
    sigma = _check_branch(branch, v)
    if formulation == SERIES:
        _check_series("p_quadratic", gamma * x / m)
        return m * v + sigma * gamma * 2 * v * x + gamma ** 2 * 2 * v * x ** 2 / m

    return m * v * math.exp(sigma * 2 * gamma * x / m)


def h_quadratic(
        x: float, p: float, gamma: float, branch: Branch, sys: PhysicalSystem, formulation: str = EXACT
) -> float:
    m, g = sys.m, sys.g
    sigma = _check_branch(branch, p)
    if formulation == SERIES:
        _check_series("h_quadratic", max(gamma * x / m, gamma * p ** 2 / (m ** 3 * g)))
        return p ** 2 / (2 * m) + m * g * x - sigma * gamma * (p ** 2 * x / m ** 2 - g * x ** 2) \
            + gamma ** 2 * (p ** 2 * x ** 2 / m ** 3 + 2 * g * x ** 3 / (3 * m))

    s = sigma * 2 * gamma * x / m
    return p ** 2 / (2 * m) * math.exp(-s) + m * g * x * float(exprel(s))


# dispatch on a DissipationSpec; `branch` overrides the spec and the velocity sign

def _branch(spec: DissipationSpec, v: float, branch: Branch | None = None) -> Branch:
    if branch is not None:
        return Branch(branch)
    return spec.branch if spec.branch is not None else Branch.for_velocity(v)


def constant_of_motion(
        x: float, v: float, spec: DissipationSpec, sys: PhysicalSystem, branch: Branch | None = None
) -> float:
    if spec.law == LINEAR:
        return k_linear(x, v, spec.parameter, sys, spec.formulation)
    return k_quadratic(x, v, spec.parameter, _branch(spec, v, branch), sys, spec.formulation)


def lagrangian(x: float, v: float, spec: DissipationSpec, sys: PhysicalSystem, branch: Branch | None = None) -> float:
    if spec.law == LINEAR:
        return l_linear(x, v, spec.parameter, sys, spec.formulation)
    return l_quadratic(x, v, spec.parameter, _branch(spec, v, branch), sys, spec.formulation)


def momentum(x: float, v: float, spec: DissipationSpec, sys: PhysicalSystem, branch: Branch | None = None) -> float:
    if spec.law == LINEAR:
        return p_linear(v, spec.parameter, sys, spec.formulation)
    return p_quadratic(x, v, spec.parameter, _branch(spec, v, branch), sys, spec.formulation)


def hamiltonian(x: float, p: float, spec: DissipationSpec, sys: PhysicalSystem, branch: Branch | None = None) -> float:
    if spec.law == LINEAR:
        return h_linear(x, p, spec.parameter, sys, spec.formulation)
    return h_quadratic(x, p, spec.parameter, _branch(spec, p, branch), sys, spec.formulation)


def acceleration(v: float, spec: DissipationSpec, sys: PhysicalSystem) -> float:
    if spec.law == LINEAR:
        return -sys.g - spec.parameter * v / sys.m
    return -sys.g - spec.parameter * v * abs(v) / sys.m
