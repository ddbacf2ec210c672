from typing import Any, Iterator

from dampedbouncer.classical.quantities import LINEAR, QUADRATIC, Branch
from dampedbouncer.common.system_configs import PhysicalSystem
from dampedbouncer.elements.perturbation import H_ROUTE, K_ROUTE
from dampedbouncer.oracle.diagonalization import diagonalize_quadratic
from dampedbouncer.oracle.second_order import second_order_by_elements
from dampedbouncer.spectra.spectrum import DERIVED, PRINTED, delta_e, energy_level
from dampedbouncer.verifiers.tolerance_verifier import ToleranceVerifier

SCALING_GAMMA = 0.004
SCALING_SIZE = 120
DRIFT_GAMMA = 0.005
DRIFT_BOUND = 1e-6
ORACLE_SIZE = 40
ORACLE_ALPHA = 0.02
ORACLE_GAMMA = 0.01
SCALING_BAND = (6.0, 10.0)


class SpectrumVerifier(ToleranceVerifier):
    """Perturbative levels against diagonalization, quadrature-built sums and the printed route difference."""
    suite = "spectrum"
    __slots__ = ['_sys']

    def __init__(self) -> None:
        self._sys: PhysicalSystem = PhysicalSystem.normalized()

    def _scaling_cases(self, routes: tuple[str, ...], branches: tuple[Branch, ...], levels: list[int]):
        for route in routes:
            for branch in branches:
                full = diagonalize_quadratic(route, SCALING_GAMMA, branch, SCALING_SIZE, self._sys, levels)
                half = diagonalize_quadratic(route, SCALING_GAMMA / 2, branch, SCALING_SIZE, self._sys, levels)
                ratios = [full.comparison(n).deviation / half.comparison(n).deviation for n in levels]
                lo, hi = SCALING_BAND
                yield f"{route}-{branch.value} cubic residual scaling n<={levels[-1]}", ratios, {
                    'kind': 'range', 'lo': lo, 'hi': hi,
                }

    def _drift_cases(self):
        small = diagonalize_quadratic(K_ROUTE, DRIFT_GAMMA, Branch.UP, SCALING_SIZE, self._sys, [1])
        large = diagonalize_quadratic(K_ROUTE, DRIFT_GAMMA, Branch.UP, 2 * SCALING_SIZE, self._sys, [1])
        drift = large.comparison(1).eigenvalue - small.comparison(1).eigenvalue
        yield f"ground level drift N={SCALING_SIZE} vs {2 * SCALING_SIZE}", drift, {
            'kind': 'bound', 'bound': DRIFT_BOUND,
        }
        yield "ground level Ritz monotone", drift <= 1e-12, {'kind': 'flag'}

    def _oracle_cases(self, levels: list[int]):
        for law, parameter, branch in ((LINEAR, ORACLE_ALPHA, None), (QUADRATIC, ORACLE_GAMMA, Branch.UP)):
            for route in (K_ROUTE, H_ROUTE):
                computed, expected = [], []
                for n in levels:
                    oracle = second_order_by_elements(route, law, n, parameter, self._sys, ORACLE_SIZE, branch)
                    closed = energy_level(route, n, law, parameter, self._sys, branch, basis_size=ORACLE_SIZE)
                    computed.append(closed.shift2)
                    expected.append(oracle.shift2)
                yield f"{route}-{law} shift2 vs quadrature elements n<={levels[-1]}", computed, {
                    'expected': expected, 'rtol': 1e-8,
                }

    def _route_cases(self, levels: list[int]):
        for branch in (Branch.UP, Branch.DOWN):
            comparisons = [
                delta_e(n, QUADRATIC, ORACLE_GAMMA, branch, self._sys, formula=PRINTED) for n in levels
            ]
            yield f"printed route difference ({branch.value})", all(c.matches_absolute for c in comparisons), {
                'kind': 'flag', 'message': "E^H - E^K does not reproduce sigma (16/15) eps z_n^2",
            }
        for n in levels:
            up = energy_level(K_ROUTE, n, QUADRATIC, ORACLE_GAMMA, self._sys, Branch.UP, formula=DERIVED)
            down = energy_level(K_ROUTE, n, QUADRATIC, ORACLE_GAMMA, self._sys, Branch.DOWN, formula=DERIVED)
            yield f"branch cancellation n={n}", up.shift1 + down.shift1, {'expected': 0.0}

    def cases(self, quick: bool = False) -> Iterator[tuple[str, Any, dict]]:
        levels = [1, 2, 3] if quick else [1, 2, 3, 4, 5]
        branches = (Branch.UP,) if quick else (Branch.UP, Branch.DOWN)

        yield from self._route_cases(levels)
        yield from self._oracle_cases(levels[:2] if quick else levels)
        yield from self._scaling_cases((K_ROUTE, H_ROUTE), branches, levels)
        if not quick:
            yield from self._drift_cases()
