"""Airy functions, the negative Airy zeros and the bouncer eigenbasis.

The unperturbed bouncer eigenfunctions in the normalized coordinate z = x / l_g are
psi_n(z) = Ai(z - z_n) / |Ai'(-z_n)|, with Ai(-z_n) = 0 and E_n = m g l_g z_n.
"""
import functools
import logging
import math
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from dampedbouncer.common.errors import ConvergenceError, DomainError, QuadratureError
from dampedbouncer.common.roots import newton_bisect

MAX_ARGUMENT = 80.0
ZERO_TOLERANCE = 1e-12

QUADRATURE_ORDER = 32
QUADRATURE_MAX_DEPTH = 30
QUADRATURE_TAIL = 15.0
QUADRATURE_TAIL_BOUND = 1e-14

_NODES, _WEIGHTS = leggauss(QUADRATURE_ORDER)


def _check_argument(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"Airy argument must be finite, got {x}.")
    if abs(x) > MAX_ARGUMENT:
        raise DomainError(f"Airy argument {x} outside [-{MAX_ARGUMENT}, {MAX_ARGUMENT}].")
    return x


def ai(x: float) -> float:
    return float(special.airy(_check_argument(x))[0])


def aip(x: float) -> float:
    return float(special.airy(_check_argument(x))[1])


def ai_and_derivative(x: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Ai and Ai' without the argument range check (used by the quadrature)."""
    values, derivatives, _, _ = special.airy(x)
    return values, derivatives


def zero_seed(n: int) -> float:
    """Asymptotic estimate of the n-th zero of Ai(-z)."""
    t = 3.0 * math.pi * (4 * n - 1) / 8.0
    return t ** (2.0 / 3.0) * (1.0 + 5.0 / (48.0 * t ** 2) - 5.0 / (36.0 * t ** 4))


@functools.lru_cache(maxsize=4096)
def zero(n: int) -> float:
    """n-th positive root z_n of Ai(-z) = 0, n = 1, 2, ..."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"Airy zero index must be a positive integer, got {n}.")
    n = int(n)

    seed = zero_seed(n)
    half_spacing = 0.5 * math.pi / math.sqrt(seed)
    lo, hi = max(seed - half_spacing, 0.0), seed + half_spacing

    def f(z: float) -> float:
        return float(special.airy(-z)[0])

    def df(z: float) -> float:
        return -float(special.airy(-z)[1])

    root, iterations = newton_bisect(f, df, lo, hi, rtol=1e-15, max_iter=200)
    residual = abs(f(root))
    if residual > ZERO_TOLERANCE:
        raise ConvergenceError(f"Airy zero n={n} not refined, |Ai(-z_n)|={residual:.3e}", iterations=iterations)

    logging.debug(f"Airy zero n={n}: seed {seed:.15g} -> {root:.17g} in {iterations} iterations.")

    return root


class AiryBasis:
    """The first `max_n` bouncer eigenstates: zeros z_n and norms |Ai'(-z_n)|."""
    __slots__ = ['_zeros', '_norms']

    def __init__(self, max_n: int) -> None:
        if max_n < 1:
            raise DomainError(f"Basis size must be positive, got {max_n}.")

        zeros = np.array([zero(n) for n in range(1, max_n + 1)], dtype=float)
        norms = np.abs(ai_and_derivative(-zeros)[1])
        zeros.setflags(write=False)
        norms.setflags(write=False)

        self._zeros: np.ndarray = zeros
        self._norms: np.ndarray = norms

    @property
    def max_n(self) -> int:
        return len(self._zeros)

    @property
    def zeros(self) -> np.ndarray:
        return self._zeros

    @property
    def norms(self) -> np.ndarray:
        return self._norms

    def _check(self, n: int) -> None:
        if n < 1 or n > self.max_n:
            raise DomainError(f"Level n={n} not in basis of size {self.max_n}.")

    def zero(self, n: int) -> float:
        self._check(n)
        return float(self._zeros[n - 1])

    def norm(self, n: int) -> float:
        self._check(n)
        return float(self._norms[n - 1])

    def eigenfunction(self, n: int, z: np.ndarray | float) -> np.ndarray | float:
        self._check(n)
        return ai_and_derivative(np.asarray(z, dtype=float) - self._zeros[n - 1])[0] / self._norms[n - 1]

    def eigenfunction_derivative(self, n: int, z: np.ndarray | float) -> np.ndarray | float:
        self._check(n)
        return ai_and_derivative(np.asarray(z, dtype=float) - self._zeros[n - 1])[1] / self._norms[n - 1]

    def __repr__(self) -> str:
        return f"AiryBasis(max_n={self.max_n})"


@functools.lru_cache(maxsize=8)
def get_basis(max_n: int) -> AiryBasis:
    return AiryBasis(max_n)


def eigenfunction(n: int, z: np.ndarray | float, basis: AiryBasis | None = None) -> np.ndarray | float:
    basis = get_basis(n) if basis is None else basis
    return basis.eigenfunction(n, z)


def _gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    values = f(mid + half * _NODES)
    return float(half * np.dot(_WEIGHTS, values)), float(abs(half) * np.dot(_WEIGHTS, np.abs(values)))


def _adaptive_panel(
        f: Callable[[np.ndarray], np.ndarray], a: float, b: float, whole: float, tol: float, depth: int
) -> tuple[float, float]:
    mid = 0.5 * (a + b)
    left, left_abs = _gauss_legendre(f, a, mid)
    right, right_abs = _gauss_legendre(f, mid, b)
    refined = left + right
    error = abs(refined - whole)
    # roundoff floor relative to the integral of |f|
    if error <= max(tol, 1e-14 * (left_abs + right_abs)):
        return refined, error
    if depth >= QUADRATURE_MAX_DEPTH:
        raise QuadratureError(f"Adaptive quadrature on [{a}, {b}] not converged at depth {depth}, error {error:.3e}")

    left_value, left_error = _adaptive_panel(f, a, mid, left, 0.5 * tol, depth + 1)
    right_value, right_error = _adaptive_panel(f, mid, b, right, 0.5 * tol, depth + 1)

    return left_value + right_value, left_error + right_error


def inner_product(
        f: Callable[[np.ndarray], np.ndarray], z_max: float = 0.0, tol: float = 1e-13, panel: float = 1.0
) -> tuple[float, float]:
    """Integral of the vectorized integrand `f` over [0, inf) with an error estimate.

    Composite 32-point Gauss-Legendre on unit panels up to z_max + 15, extended
    while the integrand on the last panel is above the tail bound; each panel is
    bisected until the split estimate agrees with the whole.
    """
    z_cut = max(z_max, 0.0) + QUADRATURE_TAIL
    n_panels = max(1, int(math.ceil(z_cut / panel)))
    panel_tol = tol / n_panels

    total, error = 0.0, 0.0
    a = 0.0
    while True:
        while a < z_cut:
            b = a + panel
            whole, _ = _gauss_legendre(f, a, b)
            value, err = _adaptive_panel(f, a, b, whole, panel_tol, 0)
            total += value
            error += err
            a = b

        tail = np.max(np.abs(f(np.linspace(a - panel, a, 9))))
        if tail < QUADRATURE_TAIL_BOUND:
            break
        if z_cut > z_max + 20 * QUADRATURE_TAIL:
            raise QuadratureError(f"Integrand does not decay: |f| = {tail:.3e} at z = {a}")
        z_cut += 5.0

    return total, error
