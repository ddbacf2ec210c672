"""Second-order perturbative levels of the damped quantum bouncer for both quantization routes.

Everything is evaluated in units of m g l_g with the dimensionless dissipation eps
(see `elements.perturbation`) and converted to energies on the way out.

`derived` evaluates E_n = z_n + <n|V|n> + sum_k |<n|V|k>|^2 / (z_n - z_k) from the
verified element tables. `printed` evaluates the published closed forms verbatim.
"""
import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from sortedcontainers import SortedDict

from dampedbouncer.airy import get_basis
from dampedbouncer.classical.quantities import LAWS, LINEAR, QUADRATIC, Branch
from dampedbouncer.common.errors import ConfigError, ConvergenceError, DomainError, ValidityError
from dampedbouncer.common.system_configs import PhysicalSystem
from dampedbouncer.common.utils import parallel_map
from dampedbouncer.elements.perturbation import H_ROUTE, K_ROUTE, ROUTES, PerturbationMatrix, perturbation_matrix
from dampedbouncer.elements.table import get_table
from dampedbouncer.spectra.truncation import TAIL_TOLERANCE, TruncatedSum, accumulate

DERIVED = "derived"
PRINTED = "printed"
FORMULAS = (DERIVED, PRINTED)

BASIS_SIZE = 400
VALIDITY_GUARD = 0.2
MATCH_RTOL = 1e-12
MATCH_ATOL = 1e-15

# numerator constants of the derived quadratic second-order coefficients
_ANK_CONSTANT = {K_ROUTE: 12.0, H_ROUTE: 36.0}


@dataclass(frozen=True)
class LevelRecord:
    n: int
    E0: float
    shift1: float
    shift2: float
    E_total: float
    tail_estimate: float
    terms_used: int
    converged: bool

    def row(self) -> dict:
        return {
            'n': self.n,
            'E0': self.E0,
            'shift1': self.shift1,
            'shift2': self.shift2,
            'E_total': self.E_total,
            'tail_estimate': self.tail_estimate,
            'terms_used': self.terms_used,
        }


@dataclass
class SpectrumResult:
    route: str
    law: str
    branch: Branch | None
    parameter: float
    epsilon: float
    formula: str
    sys: PhysicalSystem
    basis_size: int
    tail_tol: float
    guard: float | None
    levels: SortedDict = field(default_factory=SortedDict)

    def __getitem__(self, n: int) -> LevelRecord:
        return self.levels[n]

    def rows(self) -> list[dict]:
        return [record.row() for record in self.levels.values()]

    def header(self) -> dict:
        return {
            'route': self.route,
            'law': self.law,
            'branch': None if self.branch is None else self.branch.value,
            'parameter': self.parameter,
            'epsilon': self.epsilon,
            'formula': self.formula,
            'system': self.sys.as_dict(),
            'basis_size': self.basis_size,
            'tail_tol': self.tail_tol,
            'validity_guard': self.guard,
        }

    @property
    def converged(self) -> bool:
        return all(record.converged for record in self.levels.values())


@dataclass(frozen=True)
class RouteComparison:
    """E^H - E^K at one level: relative (direct), absolute in m g l_g, and the printed right-hand side."""
    n: int
    E0: float
    E_K: float
    E_H: float
    direct: float
    absolute: float
    printed_rhs: float
    matches_relative: bool
    matches_absolute: bool

    def row(self) -> dict:
        return {
            'n': self.n,
            'E0': self.E0,
            'E_K': self.E_K,
            'E_H': self.E_H,
            'delta_E': self.direct,
            'delta_E_printed': self.printed_rhs,
            'printed_matches': 'relative' if self.matches_relative else 'absolute' if self.matches_absolute else 'none',
        }


def _check_options(route: str, law: str, branch: Branch | None, formula: str) -> Branch | None:
    if route not in ROUTES:
        raise ConfigError(f"Quantization route `{route}` not supported!")
    if law not in LAWS:
        raise ConfigError(f"Dissipation law `{law}` not supported!")
    if formula not in FORMULAS:
        raise ConfigError(f"Formula mode `{formula}` not supported!")
    if law == QUADRATIC:
        if branch is None:
            raise ConfigError("The quadratic law needs a velocity branch (up or down).")
        return Branch(branch)
    if branch is not None:
        raise ConfigError("A velocity branch only applies to the quadratic law.")
    return None


def epsilon(law: str, parameter: float, sys: PhysicalSystem) -> float:
    if not math.isfinite(parameter) or parameter < 0:
        raise ConfigError(f"Dissipation parameter must be finite and >= 0, got {parameter}.")
    return sys.linear_epsilon(parameter) if law == LINEAR else sys.quadratic_epsilon(parameter)


@functools.lru_cache(maxsize=32)
def cached_perturbation(route: str, law: str, branch: Branch | None, size: int) -> PerturbationMatrix:
    return perturbation_matrix(route, law, get_table(size), branch)


def _zeros(size: int) -> np.ndarray:
    return get_basis(size).zeros


def a_nk(n: int, k: int, zeros: np.ndarray, route: str = K_ROUTE, formula: str = PRINTED) -> float:
    """Quadratic second-order coefficient.

    printed: |12 - 2 z_k (z_n - z_k)^2 + (z_n - z_k)^3|^2 / (z_k - z_n)^9
    derived: (c - 2 z_k d^2 - d^3)^2 / d^9, d = z_n - z_k, c = 12 (K) or 36 (H),
             so that 4 a_nk = |<n|V|k>|^2 / (z_n - z_k).
    """
    if n == k:
        raise DomainError(f"a_nk undefined for n = k = {n}.")
    if route not in ROUTES:
        raise ConfigError(f"Quantization route `{route}` not supported!")
    if not (1 <= n <= len(zeros) and 1 <= k <= len(zeros)):
        raise DomainError(f"a_nk needs z_{max(n, k)}, only {len(zeros)} zeros given.")
    zn, zk = float(zeros[n - 1]), float(zeros[k - 1])
    delta = zn - zk
    if formula == PRINTED:
        return abs(12.0 - 2.0 * zk * delta ** 2 + delta ** 3) ** 2 / (zk - zn) ** 9
    if formula == DERIVED:
        return (_ANK_CONSTANT[route] - 2.0 * zk * delta ** 2 - delta ** 3) ** 2 / delta ** 9
    raise ConfigError(f"Formula mode `{formula}` not supported!")


def _printed_linear_terms(n: int, zeros: np.ndarray) -> np.ndarray:
    gap = zeros - zeros[n - 1]
    safe = np.where(gap == 0.0, 1.0, gap)
    terms = np.abs(0.5 + 1.0 / safe) ** 2 / safe
    terms[n - 1] = 0.0
    return terms


def _printed_quadratic_terms(n: int, zeros: np.ndarray) -> np.ndarray:
    zn = zeros[n - 1]
    delta = zn - zeros
    safe = np.where(delta == 0.0, 1.0, delta)
    terms = np.abs(12.0 - 2.0 * zeros * safe ** 2 + safe ** 3) ** 2 / (-safe) ** 9
    terms[n - 1] = 0.0
    return terms


def _derived_terms(n: int, matrix: PerturbationMatrix, zeros: np.ndarray) -> np.ndarray:
    gap = zeros[n - 1] - zeros
    safe = np.where(gap == 0.0, 1.0, gap)
    terms = matrix.order1_abs2()[n - 1] / safe
    terms[n - 1] = 0.0
    return terms


def normalized_shifts(
        route: str, n: int, law: str, eps: float, branch: Branch | None, size: int, formula: str
) -> tuple[float, float, TruncatedSum]:
    """(shift1, shift2 / eps^2 bracket, truncated sum) in units of m g l_g."""
    zeros = _zeros(size)
    zn = float(zeros[n - 1])

    if formula == DERIVED:
        matrix = cached_perturbation(route, law, branch, size)
        summed = accumulate(n, _derived_terms(n, matrix, zeros))
        return eps * matrix.first_order_shift(n), float(matrix.order2[n - 1, n - 1]) + summed.value, summed

    if law == LINEAR:
        summed = accumulate(n, _printed_linear_terms(n, zeros))
        if route == K_ROUTE:
            return 0.0, zn ** 2 / 5.0 + 8.0 / 9.0 * summed.value, summed
        return 0.0, zn ** 2 / 30.0 + 4.0 / 9.0 * summed.value, summed

    sigma = branch.sign
    summed = accumulate(n, _printed_quadratic_terms(n, zeros))
    bracket = 2.0 * (-0.5 + 56.0 * zn ** 3 / 105.0) + 4.0 * summed.value
    if route == K_ROUTE:
        return -sigma * 12.0 / 15.0 * eps * zn ** 2, bracket, summed
    return sigma * 4.0 / 15.0 * eps * zn ** 2, bracket, summed


def energy_level(
        route: str, n: int, law: str, parameter: float, sys: PhysicalSystem, branch: Branch | None = None,
        basis_size: int = BASIS_SIZE, formula: str = DERIVED, tail_tol: float = TAIL_TOLERANCE,
        guard: float | None = VALIDITY_GUARD, strict: bool = False
) -> LevelRecord:
    branch = _check_options(route, law, branch, formula)
    if n < 1 or n > basis_size:
        raise DomainError(f"Level n={n} outside the basis 1..{basis_size}.")
    eps = epsilon(law, parameter, sys)

    shift1, bracket, summed = normalized_shifts(route, n, law, eps, branch, basis_size, formula)
    shift2 = eps ** 2 * bracket
    tail = eps ** 2 * summed.tail_estimate
    z_n = float(_zeros(basis_size)[n - 1])

    if guard is not None and abs(shift1 + shift2) >= guard * z_n:
        raise ValidityError(
            f"Level n={n}: |shift| = {abs(shift1 + shift2):.6g} m g l_g exceeds {guard} E0 = {guard * z_n:.6g}; "
            f"decrease the dissipation parameter."
        )

    converged = eps == 0 or summed.converged(bracket, tail_tol)
    if not converged:
        message = f"Level n={n}: {route}-{law} second-order sum not converged at N={basis_size} " \
                  f"(tail {tail:.3e} vs shift2 {shift2:.3e}, decay exponent {summed.decay_exponent:.3f})"
        if strict:
            raise ConvergenceError(message, iterations=summed.terms_used)
        logging.warning(message)

    # +0.0 folds negative zeros
    e_g = sys.e_g
    shift1, shift2, tail = shift1 + 0.0, shift2 + 0.0, tail + 0.0
    return LevelRecord(
        n=n,
        E0=e_g * z_n,
        shift1=e_g * shift1,
        shift2=e_g * shift2,
        E_total=e_g * (z_n + shift1 + shift2),
        tail_estimate=e_g * tail,
        terms_used=summed.terms_used,
        converged=converged,
    )


def energy_k(n: int, law: str, parameter: float, branch: Branch | None, sys: PhysicalSystem, **options) -> LevelRecord:
    return energy_level(K_ROUTE, n, law, parameter, sys, branch, **options)


def energy_h(n: int, law: str, parameter: float, branch: Branch | None, sys: PhysicalSystem, **options) -> LevelRecord:
    return energy_level(H_ROUTE, n, law, parameter, sys, branch, **options)


def compute_spectrum(
        route: str, levels: list[int], law: str, parameter: float, sys: PhysicalSystem,
        branch: Branch | None = None, basis_size: int = BASIS_SIZE, formula: str = DERIVED,
        tail_tol: float = TAIL_TOLERANCE, guard: float | None = VALIDITY_GUARD, strict: bool = False,
        threads: int | None = None
) -> SpectrumResult:
    branch = _check_options(route, law, branch, formula)
    # build the shared tables once before fanning out
    if formula == DERIVED:
        cached_perturbation(route, law, branch, basis_size)

    def solve(n: int) -> LevelRecord:
        return energy_level(route, n, law, parameter, sys, branch, basis_size, formula, tail_tol, guard, strict)

    result = SpectrumResult(
        route=route, law=law, branch=branch, parameter=parameter, epsilon=epsilon(law, parameter, sys),
        formula=formula, sys=sys, basis_size=basis_size, tail_tol=tail_tol, guard=guard,
    )
    for record in parallel_map(solve, levels, threads):
        result.levels[record.n] = record

    return result


def _printed_route_difference(n: int, law: str, eps: float, branch: Branch | None, size: int) -> float:
    zeros = _zeros(size)
    zn = float(zeros[n - 1])
    if law == QUADRATIC:
        return branch.sign * 16.0 / 15.0 * eps * zn ** 2
    summed = accumulate(n, _printed_linear_terms(n, zeros))
    return eps ** 2 * (-zn / 36.0 - 4.0 / 9.0 * summed.value / zn)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= MATCH_RTOL * max(abs(a), abs(b)) + MATCH_ATOL


def delta_e(
        n: int, law: str, parameter: float, branch: Branch | None, sys: PhysicalSystem,
        basis_size: int = BASIS_SIZE, formula: str = DERIVED, guard: float | None = VALIDITY_GUARD,
        strict: bool = False
) -> RouteComparison:
    """(E^H - E^K) / E0 by direct subtraction, next to the printed closed form of the same quantity."""
    options = dict(basis_size=basis_size, formula=formula, guard=guard, strict=strict)
    level_k = energy_k(n, law, parameter, branch, sys, **options)
    level_h = energy_h(n, law, parameter, branch, sys, **options)

    difference = level_h.E_total - level_k.E_total
    direct = difference / level_k.E0
    absolute = sys.to_dimensionless_energy(difference)
    eps = epsilon(law, parameter, sys)
    rhs = _printed_route_difference(n, law, eps, None if branch is None else Branch(branch), basis_size)

    return RouteComparison(
        n=n,
        E0=level_k.E0,
        E_K=level_k.E_total,
        E_H=level_h.E_total,
        direct=direct,
        absolute=absolute,
        printed_rhs=rhs,
        matches_relative=_close(direct, rhs),
        matches_absolute=_close(absolute, rhs),
    )


def compare_routes(
        levels: list[int], law: str, parameter: float, branch: Branch | None, sys: PhysicalSystem,
        threads: int | None = None, **options
) -> list[RouteComparison]:
    return parallel_map(lambda n: delta_e(n, law, parameter, branch, sys, **options), levels, threads)
