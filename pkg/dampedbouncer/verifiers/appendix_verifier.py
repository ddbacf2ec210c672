import logging
from typing import Any, Iterator

import numpy as np
from deepdiff import DeepDiff

from dampedbouncer.airy import get_basis
from dampedbouncer.elements.catalog import FAMILIES, PRINTED, VERIFIED
from dampedbouncer.elements.table import build_table
from dampedbouncer.oracle.quadrature_elements import FAMILY_DESCRIPTORS, quadrature_table
from dampedbouncer.verifiers.tolerance_verifier import ToleranceVerifier

RTOL = 1e-6
ATOL = 1e-8


def _scaled(matrix: np.ndarray, scale: np.ndarray, name: str) -> dict[str, float]:
    size = matrix.shape[0]
    return {
        f"<{n + 1}|{name}|{k + 1}>": float(matrix[n, k] / scale[n, k])
        for n in range(size) for k in range(size)
    }


def errata_report(quadrature: dict[str, np.ndarray], printed: dict[str, np.ndarray]) -> dict[str, str]:
    """Per family, the DeepDiff of the printed closed forms against quadrature (relative, 1e-6)."""
    report = {}
    for name, reference in quadrature.items():
        if name not in printed:
            continue
        scale = np.maximum(np.abs(reference), ATOL / RTOL)
        diff = DeepDiff(_scaled(reference, scale, name), _scaled(printed[name], scale, name), math_epsilon=RTOL)
        if diff:
            report[name] = str(diff)
            logging.warning(f"Printed closed form for `{name}` disagrees with quadrature on "
                            f"{len(diff.get('values_changed', {}))} entries.")

    return report


class AppendixVerifier(ToleranceVerifier):
    """Closed-form element catalog against quadrature, n, k <= size."""
    suite = "appendix"
    __slots__ = ['_size', '_errata']

    def __init__(self, size: int = 10) -> None:
        self._size: int = size
        self._errata: dict[str, str] = {}

    @property
    def errata(self) -> dict[str, str]:
        return self._errata

    def cases(self, quick: bool = False) -> Iterator[tuple[str, Any, dict]]:
        size = min(self._size, 6) if quick else self._size
        basis = get_basis(size)
        verified = build_table(basis, size, VERIFIED)
        printed = build_table(basis, size, PRINTED)

        quadrature = {}
        for name in FAMILIES:
            quadrature[name] = quadrature_table(FAMILY_DESCRIPTORS[name], size, basis)
            yield f"{name} n,k<={size}", verified.family(name), {
                'expected': quadrature[name], 'rtol': RTOL, 'atol': ATOL,
            }

        sign = np.sign(np.round(quadrature["z"], 12))
        off = ~np.eye(size, dtype=bool)
        labels = np.arange(1, size + 1)
        parity = np.where((labels[:, None] + labels[None, :]) % 2 == 0, 1.0, -1.0)
        yield "parity of <n|z|k>", bool(np.all(sign[off] == -parity[off])), {
            'kind': 'flag', 'message': "off-diagonal <n|z|k> does not carry (-1)^(n+k+1)",
        }

        self._errata = errata_report(quadrature, {name: printed.family(name) for name in FAMILIES if name != "zd"})
