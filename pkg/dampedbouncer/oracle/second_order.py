"""Second-order level shifts assembled from quadrature-built matrix elements.

The operators are written from the classical series with v = -i sqrt(2) d/dz
(units m = g = l_g = 1) and the symmetrized operator products spelled out word
by word, so no closed form or hand reduction enters.
"""
import math
from dataclasses import dataclass

import numpy as np

from dampedbouncer.airy import AiryBasis, get_basis
from dampedbouncer.classical.quantities import LAWS, LINEAR, Branch
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.common.system_configs import PhysicalSystem
from dampedbouncer.elements.perturbation import K_ROUTE, ROUTES
from dampedbouncer.oracle.quadrature_elements import quadrature_row

MIN_SIZE = 40

VELOCITY = -1j * math.sqrt(2.0)

# (v^2 x + v x v + x v^2) / 3 without the v^2 prefactor
SYMMETRIC_D2Z = "1/3 d^2 z + 1/3 d z d + 1/3 z d^2"
# the six orderings of v^2 x^2
SYMMETRIC_D2Z2 = "1/6 d^2 z^2 + 1/6 d z^2 d + 1/6 z^2 d^2 + 1/6 z d^2 z + 1/6 z d z d + 1/6 d z d z"


@dataclass(frozen=True)
class OperatorSeries:
    """order = sum of coefficient * descriptor."""
    order1: tuple[tuple[complex, str], ...]
    order2: tuple[tuple[complex, str], ...]


def operator_series(route: str, law: str, branch: Branch | None = None) -> OperatorSeries:
    if route not in ROUTES:
        raise ConfigError(f"Quantization route `{route}` not supported!")
    if law not in LAWS:
        raise ConfigError(f"Dissipation law `{law}` not supported!")

    if law == LINEAR:
        # K: -(eps/3) v^3 + (eps^2/4) v^4,  H: (eps/6) p^3 + (eps^2/24) p^4
        c1, c2 = (-1.0 / 3.0, 1.0 / 4.0) if route == K_ROUTE else (1.0 / 6.0, 1.0 / 24.0)
        return OperatorSeries(
            order1=((c1 * VELOCITY ** 3, "d^3"),),
            order2=((c2 * VELOCITY ** 4, "d^4"),),
        )

    if branch is None:
        raise ConfigError("The quadratic law needs a velocity branch (up or down).")
    sigma = Branch(branch).sign
    z2_sign = 1.0 if route == K_ROUTE else -1.0
    # K: -sigma eps (v^2 x + g x^2),  H: -sigma eps (p^2 x / m^2 - g x^2)
    return OperatorSeries(
        order1=((-sigma * VELOCITY ** 2, SYMMETRIC_D2Z), (-sigma * z2_sign, "z^2")),
        order2=((VELOCITY ** 2, SYMMETRIC_D2Z2), (2.0 / 3.0, "z^3")),
    )


def _row(terms: tuple[tuple[complex, str], ...], n: int, size: int, basis: AiryBasis) -> np.ndarray:
    row = np.zeros(size, dtype=complex)
    for coefficient, descriptor in terms:
        row += coefficient * quadrature_row(descriptor, n, size, basis)
    return row


@dataclass(frozen=True)
class SecondOrderResult:
    n: int
    E0: float
    shift1: float
    shift2: float
    E_total: float


def second_order_by_elements(
        route: str, law: str, n: int, parameter: float, sys: PhysicalSystem, size: int = MIN_SIZE,
        branch: Branch | None = None, basis: AiryBasis | None = None
) -> SecondOrderResult:
    """E_n = E0 + <n|V|n> + sum_{k != n} |<n|V|k>|^2 / (E_n - E_k) over k <= size."""
    if size < MIN_SIZE:
        raise ConfigError(f"Second-order oracle needs N >= {MIN_SIZE}, got N={size}.")
    if not 1 <= n <= size:
        raise ConfigError(f"Level n={n} outside 1..{size}.")
    basis = get_basis(size) if basis is None else basis
    series = operator_series(route, law, branch)
    eps = sys.linear_epsilon(parameter) if law == LINEAR else sys.quadratic_epsilon(parameter)

    order1 = _row(series.order1, n, size, basis)
    order2 = _row(series.order2, n, size, basis)
    zeros = basis.zeros[:size]
    z_n = float(zeros[n - 1])

    mask = np.arange(size) != n - 1
    second = float(np.sum(np.abs(order1[mask]) ** 2 / (z_n - zeros[mask])))
    shift1 = eps * float(np.real(order1[n - 1])) + 0.0
    shift2 = eps ** 2 * (float(np.real(order2[n - 1])) + second) + 0.0

    e_g = sys.e_g
    return SecondOrderResult(
        n=n,
        E0=e_g * z_n,
        shift1=e_g * shift1,
        shift2=e_g * shift2,
        E_total=e_g * (z_n + shift1 + shift2),
    )
