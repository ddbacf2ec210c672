import functools
import logging

import numpy as np

from dampedbouncer.airy import AiryBasis, get_basis
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.elements.catalog import CATALOGS, FAMILIES, VERIFIED, catalog_elements

Z_POWERS = {0: "one", 1: "z", 2: "z2", 3: "z3"}
D_POWERS = {1: "d", 2: "d2", 3: "d3", 4: "d4"}


class ElementTable:
    """Immutable N x N tables <n|z^s|k> (s = 0..3), <n|d^s|k> (s = 1..4) and <n|z d|k>."""
    __slots__ = ['_basis', '_size', '_catalog', '_families']

    def __init__(self, basis: AiryBasis, size: int, catalog: str, families: dict[str, np.ndarray]) -> None:
        self._basis: AiryBasis = basis
        self._size: int = size
        self._catalog: str = catalog
        for matrix in families.values():
            matrix.setflags(write=False)
        self._families: dict[str, np.ndarray] = families

    @property
    def basis(self) -> AiryBasis:
        return self._basis

    @property
    def size(self) -> int:
        return self._size

    @property
    def catalog(self) -> str:
        return self._catalog

    @property
    def zeros(self) -> np.ndarray:
        return self._basis.zeros[:self._size]

    def family(self, name: str) -> np.ndarray:
        if name not in self._families:
            raise ConfigError(f"Element family `{name}` not supported!")
        return self._families[name]

    def z_pow(self, s: int) -> np.ndarray:
        if s not in Z_POWERS:
            raise ConfigError(f"<n|z^{s}|k> not tabulated (s = 0..3).")
        return self._families[Z_POWERS[s]]

    def d_pow(self, s: int) -> np.ndarray:
        if s not in D_POWERS:
            raise ConfigError(f"<n|d^{s}/dz^{s}|k> not tabulated (s = 1..4).")
        return self._families[D_POWERS[s]]

    @property
    def zd(self) -> np.ndarray:
        return self._families["zd"]

    def value(self, name: str, n: int, k: int) -> float:
        if not (1 <= n <= self._size and 1 <= k <= self._size):
            raise ConfigError(f"<{n}|{name}|{k}> outside the {self._size} x {self._size} table.")
        return float(self.family(name)[n - 1, k - 1])

    def rows(self, names: list[str] | None = None, max_n: int | None = None) -> list[dict]:
        """Flat (name, n, k, value) records, row-major per family."""
        limit = self._size if max_n is None else min(max_n, self._size)
        rows = []
        for name in (names or list(FAMILIES)):
            matrix = self.family(name)
            for n in range(1, limit + 1):
                for k in range(1, limit + 1):
                    rows.append({'name': name, 'n': n, 'k': k, 'value': float(matrix[n - 1, k - 1])})
        return rows

    def __repr__(self) -> str:
        return f"ElementTable(size={self._size}, catalog={self._catalog!r})"


def build_table(basis: AiryBasis, size: int, catalog: str = VERIFIED) -> ElementTable:
    if catalog not in CATALOGS:
        raise ConfigError(f"Element catalog `{catalog}` not supported!")
    if size < 2:
        raise ConfigError(f"Element table needs N >= 2, got N={size}.")
    if basis.max_n < size:
        raise ConfigError(f"Basis too small: {basis.max_n} zeros for an N={size} table.")

    zeros = np.array(basis.zeros[:size], dtype=float)
    families = catalog_elements(zeros, catalog)
    logging.debug(f"Built {catalog} element table N={size}.")

    return ElementTable(basis, size, catalog, families)


@functools.lru_cache(maxsize=16)
def get_table(size: int, catalog: str = VERIFIED) -> ElementTable:
    return build_table(get_basis(size), size, catalog)
