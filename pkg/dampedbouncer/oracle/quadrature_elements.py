"""Matrix elements <n|A|k> of operator words over z and d/dz, computed by quadrature.

A descriptor is a sum of words with rational coefficients, e.g. "z^3", "d z d",
"-2/3 d^2 z - 2/3 d z d - 2/3 z d^2" or "1". Factors act right to left on psi_k.
Every intermediate function is kept as P(z) psi_k + Q(z) psi_k' with polynomials
P, Q, using psi_k'' = (z - z_k) psi_k, so a word never needs more than Ai and Ai'.
"""
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from dampedbouncer.airy import AiryBasis, inner_product
from dampedbouncer.common.errors import ConfigError, QuadratureError
from dampedbouncer.common.utils import parallel_map

ELEMENT_TOLERANCE = 1e-8

FAMILY_DESCRIPTORS = {
    "one": "1",
    "z": "z",
    "z2": "z^2",
    "z3": "z^3",
    "d": "d",
    "d2": "d^2",
    "d3": "d^3",
    "d4": "d^4",
    "zd": "z d",
}

_FACTOR = re.compile(r'^([zd])(?:\^(\d+))?$')
_COEFFICIENT = re.compile(r'^\d+(\.\d+)?(/\d+(\.\d+)?)?$')


@dataclass(frozen=True)
class Term:
    coefficient: float
    factors: tuple[tuple[str, int], ...]


def parse_descriptor(descriptor: str) -> list[Term]:
    terms = []
    text = descriptor.replace('-', '+-')
    for chunk in text.split('+'):
        chunk = chunk.strip()
        if not chunk:
            continue
        sign = 1.0
        if chunk.startswith('-'):
            sign, chunk = -1.0, chunk[1:].strip()

        tokens = chunk.split()
        coefficient = 1.0
        if tokens and _COEFFICIENT.match(tokens[0]):
            coefficient = float(Fraction(tokens.pop(0)))

        factors = []
        for token in tokens:
            if token == "1":
                continue
            match = _FACTOR.match(token)
            if match is None:
                raise ConfigError(f"Cannot parse `{token}` in operator descriptor `{descriptor}`.")
            power = int(match.group(2)) if match.group(2) is not None else 1
            factors.append((match.group(1), power))
        terms.append(Term(sign * coefficient, tuple(factors)))

    if not terms:
        raise ConfigError(f"Empty operator descriptor `{descriptor}`.")

    return terms


def apply_word(factors: tuple[tuple[str, int], ...], z_k: float) -> tuple[Polynomial, Polynomial]:
    """(P, Q) with word(psi_k) = P psi_k + Q psi_k'."""
    p, q = Polynomial([1.0]), Polynomial([0.0])
    shift = Polynomial([-z_k, 1.0])
    for name, power in reversed(factors):
        for _ in range(power):
            if name == "z":
                p, q = p * Polynomial([0.0, 1.0]), q * Polynomial([0.0, 1.0])
            else:
                p, q = p.deriv() + q * shift, p + q.deriv()

    return p, q


def apply_descriptor(descriptor: str | list[Term], z_k: float) -> tuple[Polynomial, Polynomial]:
    terms = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    p, q = Polynomial([0.0]), Polynomial([0.0])
    for term in terms:
        tp, tq = apply_word(term.factors, z_k)
        p, q = p + term.coefficient * tp, q + term.coefficient * tq

    return p, q


def element_with_error(descriptor: str | list[Term], n: int, k: int, basis: AiryBasis) -> tuple[float, float]:
    z_n, z_k = basis.zero(n), basis.zero(k)
    p, q = apply_descriptor(descriptor, z_k)

    def integrand(z: np.ndarray) -> np.ndarray:
        return basis.eigenfunction(n, z) * (p(z) * basis.eigenfunction(k, z) + q(z) * basis.eigenfunction_derivative(k, z))

    value, error = inner_product(integrand, z_max=max(z_n, z_k))
    if error > ELEMENT_TOLERANCE:
        raise QuadratureError(f"<{n}|{descriptor}|{k}>: quadrature error estimate {error:.3e} above {ELEMENT_TOLERANCE}")

    return value, error


def element_by_quadrature(descriptor: str, n: int, k: int, basis: AiryBasis) -> float:
    return element_with_error(descriptor, n, k, basis)[0]


def quadrature_table(descriptor: str, size: int, basis: AiryBasis, threads: int | None = None) -> np.ndarray:
    if basis.max_n < size:
        raise ConfigError(f"Basis too small: {basis.max_n} zeros for an N={size} table.")
    terms = parse_descriptor(descriptor)
    pairs = [(n, k) for n in range(1, size + 1) for k in range(1, size + 1)]
    values = parallel_map(lambda nk: element_with_error(terms, nk[0], nk[1], basis)[0], pairs, threads)

    return np.array(values, dtype=float).reshape(size, size)


def quadrature_row(descriptor: str, n: int, size: int, basis: AiryBasis, threads: int | None = None) -> np.ndarray:
    terms = parse_descriptor(descriptor)
    values = parallel_map(lambda k: element_with_error(terms, n, k, basis)[0], range(1, size + 1), threads)

    return np.array(values, dtype=float)


def gram_matrix(size: int, basis: AiryBasis, threads: int | None = None) -> np.ndarray:
    return quadrature_table("1", size, basis, threads)
