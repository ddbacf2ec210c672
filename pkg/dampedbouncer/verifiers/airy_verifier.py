from typing import Any, Iterator

import numpy as np

from dampedbouncer.airy import ai, get_basis
from dampedbouncer.oracle.quadrature_elements import gram_matrix
from dampedbouncer.verifiers.tolerance_verifier import ToleranceVerifier


class AiryVerifier(ToleranceVerifier):
    """Airy zeros are roots to 1e-12 and the eigenfunctions are orthonormal."""
    suite = "airy"
    __slots__ = ['_zeros', '_gram_size']

    def __init__(self, zeros: int = 50, gram_size: int = 10) -> None:
        self._zeros: int = zeros
        self._gram_size: int = gram_size

    def cases(self, quick: bool = False) -> Iterator[tuple[str, Any, dict]]:
        count = min(self._zeros, 20) if quick else self._zeros
        size = min(self._gram_size, 6) if quick else self._gram_size
        basis = get_basis(max(count, size))

        residuals = [abs(ai(-basis.zero(n))) for n in range(1, count + 1)]
        yield f"zeros 1..{count}", residuals, {'kind': 'bound', 'bound': 1e-12}

        yield f"zeros increasing 1..{count}", bool(np.all(np.diff(basis.zeros[:count]) > 0)), {'kind': 'flag'}

        gram = gram_matrix(size, basis)
        yield f"gram {size}x{size}", gram, {'expected': np.eye(size), 'atol': 1e-7}
