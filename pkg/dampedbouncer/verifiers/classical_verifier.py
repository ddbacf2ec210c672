from typing import Any, Iterator

import numpy as np

from dampedbouncer.classical.bounce_maps import bounce_sequence
from dampedbouncer.classical.estimation import estimate_alpha, estimate_gamma
from dampedbouncer.classical.integrator import integrate
from dampedbouncer.classical.quantities import EXACT, FORMULATIONS, LINEAR, QUADRATIC, SERIES, Branch, \
    DissipationSpec, constant_of_motion, hamiltonian, lagrangian, momentum
from dampedbouncer.common.system_configs import PhysicalSystem
from dampedbouncer.verifiers.tolerance_verifier import ToleranceVerifier

PARAMETERS = (0.05, 0.2)
ESTIMATION_PARAMETERS = (0.02, 0.05, 0.1, 0.2, 0.4)
SERIES_POINTS = 100
SERIES_SEED = 7
LEGENDRE_POINTS = 1000
LEGENDRE_SEED = 11
LEGENDRE_RTOL = 1e-12
# |H(x, p(x, v)) - K(x, v)| / eps^3 for the truncated series, normalized units
LEGENDRE_SERIES_BOUND = 10.0


def _spec(law: str, eps: float, formulation: str, v: float) -> DissipationSpec:
    return DissipationSpec(law, eps, formulation, None if law == LINEAR else Branch.for_velocity(v))


def series_halving_ratios(law: str, points: int, seed: int = SERIES_SEED) -> dict[str, np.ndarray]:
    """|exact - series| at eps over the same at eps/2, for every quantity of `law` at random points."""
    sys = PhysicalSystem.normalized()
    rng = np.random.default_rng(seed)
    # v^2 > x / 2 keeps the cubic residuals of L and H away from zero
    x = rng.uniform(0.05, 0.6, points)
    v = rng.uniform(0.8, 1.0, points) * rng.choice([-1.0, 1.0], points)
    eps = rng.uniform(0.02, 0.1, points)

    # H is evaluated at p = v, like the other quantities
    quantities = {
        'K': lambda i, spec: constant_of_motion(x[i], v[i], spec, sys),
        'L': lambda i, spec: lagrangian(x[i], v[i], spec, sys),
        'p': lambda i, spec: momentum(x[i], v[i], spec, sys),
        'H': lambda i, spec: hamiltonian(x[i], v[i], spec, sys),
    }

    ratios = {}
    for name, quantity in quantities.items():
        values = []
        for i in range(points):
            full = abs(quantity(i, _spec(law, eps[i], EXACT, v[i])) - quantity(i, _spec(law, eps[i], SERIES, v[i])))
            half = abs(quantity(i, _spec(law, eps[i] / 2, EXACT, v[i]))
                       - quantity(i, _spec(law, eps[i] / 2, SERIES, v[i])))
            values.append(full / half)
        ratios[name] = np.array(values)

    return ratios


def legendre_residuals(law: str, formulation: str, points: int = LEGENDRE_POINTS,
                       seed: int = LEGENDRE_SEED) -> tuple[np.ndarray, np.ndarray]:
    """(|H(x, p(x, v)) - K(x, v)| / |K(x, v)|, eps) at random points, normalized units."""
    sys = PhysicalSystem.normalized()
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.05, 1.0, points)
    v = rng.uniform(0.1, 1.0, points) * rng.choice([-1.0, 1.0], points)
    eps = rng.uniform(0.01, 0.5 if formulation == EXACT else 0.1, points)

    residuals = np.empty(points)
    for i in range(points):
        spec = _spec(law, eps[i], formulation, v[i])
        k = constant_of_motion(x[i], v[i], spec, sys)
        h = hamiltonian(x[i], momentum(x[i], v[i], spec, sys), spec, sys)
        residuals[i] = abs(h - k) / abs(k)

    return residuals, eps


class ClassicalVerifier(ToleranceVerifier):
    """Conservation along arcs, bounce maps against the integrator, parameter recovery and series order."""
    suite = "classical"
    __slots__ = ['_sys']

    def __init__(self) -> None:
        self._sys: PhysicalSystem = PhysicalSystem.normalized()

    def cases(self, quick: bool = False) -> Iterator[tuple[str, Any, dict]]:
        cycles = 3 if quick else 10
        for law in (LINEAR, QUADRATIC):
            for parameter in PARAMETERS:
                spec = DissipationSpec(law, parameter)
                trajectory = integrate(0.0, 1.0, spec, self._sys, max_bounces=cycles)
                yield f"{law} {parameter} conservation", trajectory.arc_drift(), {'kind': 'bound', 'bound': 1e-8}

                expected = [x_max for x_max, _ in bounce_sequence(1.0, spec, self._sys, cycles)]
                yield f"{law} {parameter} bounce map apexes", trajectory.apex_heights[:cycles], {
                    'expected': expected, 'rtol': 1e-6,
                }

        estimators = {LINEAR: estimate_alpha, QUADRATIC: estimate_gamma}
        for law, estimator in estimators.items():
            recovered, truth = [], []
            for parameter in ESTIMATION_PARAMETERS[:2] if quick else ESTIMATION_PARAMETERS:
                trajectory = integrate(0.0, 1.0, DissipationSpec(law, parameter), self._sys, max_bounces=1)
                recovered.append(estimator(1.0, trajectory.apex_heights[0], self._sys))
                truth.append(parameter)
            yield f"{law} parameter recovery", recovered, {'expected': truth, 'rtol': 1e-6}

        points = 20 if quick else SERIES_POINTS
        for law in (LINEAR, QUADRATIC):
            for name, ratios in series_halving_ratios(law, points).items():
                yield f"{law} series order of {name}", ratios, {'kind': 'range', 'lo': 6.0, 'hi': 10.0}

        for law in (LINEAR, QUADRATIC):
            for formulation in FORMULATIONS:
                residuals, eps = legendre_residuals(law, formulation, points // 2 if quick else LEGENDRE_POINTS)
                if formulation == EXACT:
                    yield f"{law} Legendre consistency", residuals, {'kind': 'bound', 'bound': LEGENDRE_RTOL}
                else:
                    yield f"{law} series Legendre consistency", residuals / eps ** 3, {
                        'kind': 'bound', 'bound': LEGENDRE_SERIES_BOUND,
                    }
