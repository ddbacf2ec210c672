"""Matrices of the dissipative perturbations in the bouncer eigenbasis.

Normalized variables: x = l_g z, v = -i (hbar / m l_g) d/dz = -i sqrt(2) d/dz (K route),
p = -i (hbar / l_g) d/dz = -i sqrt(2) d/dz (H route), energies in units of m g l_g.
With D = d/dz, sigma = +1 (up) / -1 (down) and eps = gamma l_g / m or alpha t_g / m:

    K, quadratic:  V = -sigma eps [v^2 z + z^2] + eps^2 [v^2 z^2 + (2/3) z^3]
    H, quadratic:  W = -sigma eps [p^2 z - z^2] + eps^2 [p^2 z^2 + (2/3) z^3]
    K, linear:     V = -(eps / 3) v^3 + (eps^2 / 4) v^4
    H, linear:     W = (eps / 6) p^3 + (eps^2 / 24) p^4

Symmetrized products reduce to

    v^2 z   -> -2 (z D^2 + D)
    v^2 z^2 -> -2 (z^2 D^2 + 2 z D + 1/2)

and <n|z^a D^2|k> = <n|z^a (z - z_k)|k> on eigenstates.
"""
import math
from dataclasses import dataclass

import numpy as np

from dampedbouncer.classical.quantities import LAWS, LINEAR, QUADRATIC, Branch
from dampedbouncer.common.errors import ConfigError, InternalConsistencyError
from dampedbouncer.elements.table import ElementTable

K_ROUTE = "K"
H_ROUTE = "H"
ROUTES = (K_ROUTE, H_ROUTE)

SYMMETRY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PerturbationMatrix:
    """O(eps) and O(eps^2) operators, dimensionless.

    For the linear law the first-order operator is i * `order1` with `order1`
    real and not symmetric; `order1_phase` carries the i.
    """
    route: str
    law: str
    branch: Branch | None
    order1: np.ndarray
    order2: np.ndarray
    order1_phase: complex = 1.0

    @property
    def symmetric(self) -> bool:
        return self.law == QUADRATIC

    def order1_complex(self) -> np.ndarray:
        return self.order1_phase * self.order1

    def order1_abs2(self) -> np.ndarray:
        return np.abs(self.order1) ** 2

    def first_order_shift(self, n: int) -> float:
        """Real part of the diagonal first-order element."""
        return float(np.real(self.order1_phase * self.order1[n - 1, n - 1]))


def _symmetrized(matrix: np.ndarray, name: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(matrix))))
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > SYMMETRY_TOLERANCE * scale:
        raise InternalConsistencyError(f"{name} not symmetric: max|M - M^T| = {asymmetry:.3e}")
    return 0.5 * (matrix + matrix.T)


def _zd2(table: ElementTable, power: int) -> np.ndarray:
    """<n|z^power D^2|k>."""
    zk = table.zeros[None, :]
    return table.z_pow(power + 1) - zk * table.z_pow(power)


def quadratic_second_order(table: ElementTable) -> np.ndarray:
    hermitized = -2.0 * (_zd2(table, 2) + 2.0 * table.zd + 0.5 * table.z_pow(0))
    return _symmetrized(hermitized + 2.0 / 3.0 * table.z_pow(3), "quadratic second-order operator")


def perturbation_matrix(route: str, law: str, table: ElementTable, branch: Branch | None = None) -> PerturbationMatrix:
    if route not in ROUTES:
        raise ConfigError(f"Quantization route `{route}` not supported!")
    if law not in LAWS:
        raise ConfigError(f"Dissipation law `{law}` not supported!")

    if law == LINEAR:
        if branch is not None:
            raise ConfigError("A velocity branch only applies to the quadratic law.")
        d3, d4 = table.d_pow(3), table.d_pow(4)
        # (-i sqrt 2)^3 = 2 sqrt 2 i, (-i sqrt 2)^4 = 4
        if route == K_ROUTE:
            order1, order2 = -2.0 * math.sqrt(2.0) / 3.0 * d3, d4
        else:
            order1, order2 = math.sqrt(2.0) / 3.0 * d3, d4 / 6.0
        return PerturbationMatrix(route, law, None, order1, order2, order1_phase=1j)

    if branch is None:
        raise ConfigError("The quadratic law needs a velocity branch (up or down).")
    sigma = Branch(branch).sign
    v2z = -2.0 * (_zd2(table, 1) + table.d_pow(1))
    z2 = table.z_pow(2)
    bracket = v2z + z2 if route == K_ROUTE else v2z - z2
    order1 = _symmetrized(-sigma * bracket, f"{route}-quadratic first-order operator")

    return PerturbationMatrix(route, law, Branch(branch), order1, quadratic_second_order(table))
