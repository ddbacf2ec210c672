"""Truncated-basis diagonalization of the quadratic-drag bouncer operators."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from dampedbouncer.airy import get_basis
from dampedbouncer.classical.quantities import QUADRATIC, Branch
from dampedbouncer.common.errors import ConfigError, ConvergenceError
from dampedbouncer.common.system_configs import PhysicalSystem
from dampedbouncer.elements.perturbation import ROUTES
from dampedbouncer.spectra.spectrum import DERIVED, VALIDITY_GUARD, cached_perturbation, energy_level

MIN_SIZE = 40
RESIDUAL_TOLERANCE = 1e-10
OVERLAP_THRESHOLD = 0.9


@dataclass(frozen=True)
class LevelComparison:
    n: int
    eigenvalue: float
    perturbative: float
    deviation: float
    overlap: float
    ambiguous: bool

    def as_dict(self) -> dict:
        return {
            'n': self.n,
            'eigenvalue': self.eigenvalue,
            'perturbative': self.perturbative,
            'deviation': self.deviation,
            'overlap': self.overlap,
            'ambiguous': self.ambiguous,
        }


@dataclass(frozen=True)
class DiagonalizationReport:
    """Energies in units of m g l_g."""
    route: str
    gamma: float
    epsilon: float
    branch: Branch
    size: int
    eigenvalues: np.ndarray
    residuals: np.ndarray
    norm: float
    comparisons: tuple[LevelComparison, ...]

    def comparison(self, n: int) -> LevelComparison:
        for entry in self.comparisons:
            if entry.n == n:
                return entry
        raise ConfigError(f"Level n={n} not compared in this report.")

    def as_dict(self) -> dict:
        return {
            'route': self.route,
            'gamma': self.gamma,
            'epsilon': self.epsilon,
            'branch': self.branch.value,
            'N': self.size,
            'residual_tolerance': RESIDUAL_TOLERANCE,
            'max_residual': float(np.max(self.residuals)),
            'norm': self.norm,
            'levels': [entry.as_dict() for entry in self.comparisons],
        }


def operator_matrix(route: str, eps: float, branch: Branch, size: int) -> np.ndarray:
    """diag(z_n) + eps <n|V1|k> + eps^2 <n|V2|k>, real symmetric."""
    matrix = cached_perturbation(route, QUADRATIC, Branch(branch), size)
    return np.diag(get_basis(size).zeros) + eps * matrix.order1 + eps ** 2 * matrix.order2


def match_levels(vectors: np.ndarray, levels: list[int]) -> list[tuple[int, float]]:
    """Eigenvector index with the largest weight on basis state n, and that weight's amplitude."""
    matches = []
    for n in levels:
        weights = np.abs(vectors[n - 1, :])
        j = int(np.argmax(weights))
        matches.append((j, float(weights[j])))

    return matches


def diagonalize_quadratic(
        route: str, gamma: float, branch: Branch, size: int, sys: PhysicalSystem,
        levels: list[int] | None = None, guard: float | None = VALIDITY_GUARD
) -> DiagonalizationReport:
    if route not in ROUTES:
        raise ConfigError(f"Quantization route `{route}` not supported!")
    if size < MIN_SIZE:
        raise ConfigError(f"Diagonalization needs N >= {MIN_SIZE}, got N={size}.")
    levels = list(range(1, 6)) if levels is None else levels
    branch = Branch(branch)
    eps = sys.quadratic_epsilon(gamma)

    perturbative = {
        n: energy_level(route, n, QUADRATIC, gamma, sys, branch, basis_size=size, formula=DERIVED, guard=guard)
        for n in levels
    }

    matrix = operator_matrix(route, eps, branch, size)
    try:
        eigenvalues, vectors = linalg.eigh(matrix)
    except linalg.LinAlgError as e:
        raise ConvergenceError(f"Dense symmetric eigensolve failed at N={size}: {e}")

    norm = float(np.linalg.norm(matrix, 2))
    residuals = np.linalg.norm(matrix @ vectors - vectors * eigenvalues, axis=0)
    worst = float(np.max(residuals))
    if worst > RESIDUAL_TOLERANCE * norm:
        raise ConvergenceError(f"Eigenpair residual {worst:.3e} above {RESIDUAL_TOLERANCE} ||M|| = {norm:.3e}")

    comparisons = []
    for n, (j, overlap) in zip(levels, match_levels(vectors, levels)):
        ambiguous = overlap < OVERLAP_THRESHOLD
        if ambiguous:
            logging.warning(f"Level n={n}: best eigenvector overlap {overlap:.3f} below {OVERLAP_THRESHOLD}")
        expected = sys.to_dimensionless_energy(perturbative[n].E_total)
        comparisons.append(LevelComparison(
            n=n,
            eigenvalue=float(eigenvalues[j]),
            perturbative=expected,
            deviation=float(eigenvalues[j]) - expected,
            overlap=overlap,
            ambiguous=ambiguous,
        ))
    logging.debug(f"Diagonalized {route}-quadratic N={size} eps={eps!r}: max residual {worst:.3e}.")

    return DiagonalizationReport(
        route=route,
        gamma=gamma,
        epsilon=eps,
        branch=branch,
        size=size,
        eigenvalues=eigenvalues,
        residuals=residuals,
        norm=norm,
        comparisons=tuple(comparisons),
    )
