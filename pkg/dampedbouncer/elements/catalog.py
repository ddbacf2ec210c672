"""Closed forms of the bouncer matrix elements <n|z^s|k> and <n|d^s/dz^s|k>.

Notation: s = (-1)^(n+k) with 1-based labels, delta = z_n - z_k (row n, column k).
psi_n'(0) = (-1)^(n+1), so s is also psi_n'(0) psi_k'(0), the boundary term left
over by integrating odd derivatives by parts.

Two catalogs are kept side by side:

* PRINTED reproduces the commonly tabulated closed forms verbatim.
* VERIFIED is what quadrature confirms. It agrees with PRINTED on every diagonal
  and on the z, z^2 and d/dz families; for z^3, d^2, d^3 and d^4 the off-diagonal
  entries follow from H0 = -d^2/dz^2 + z via [H0, A]_nk = (z_n - z_k) A_nk and
  the reductions

      d^2 psi_k = (z - z_k) psi_k
      d^3 psi_k = psi_k + (z - z_k) psi_k'
      d^4 psi_k = 2 psi_k' + (z - z_k)^2 psi_k

  which give <d^2> = <z>, <d^3> = <z d> + 1 - z_k <d>, <d^4> = 2<d> + <z^2> - 2 z_k <z> + z_k^2.
"""
import numpy as np

from dampedbouncer.common.errors import ConfigError, InternalConsistencyError

PRINTED = "printed"
VERIFIED = "verified"
CATALOGS = (VERIFIED, PRINTED)

FAMILIES = ("one", "z", "z2", "z3", "d", "d2", "d3", "d4", "zd")
TABULATED_FAMILIES = ("one", "z", "z2", "z3", "d", "d2", "d3", "d4")

DEGENERACY_GUARD = 1e-9


def _grids(zeros: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    size = len(zeros)
    labels = np.arange(1, size + 1)
    sign = np.where((labels[:, None] + labels[None, :]) % 2 == 0, 1.0, -1.0)
    zn = np.broadcast_to(zeros[:, None], (size, size))
    zk = np.broadcast_to(zeros[None, :], (size, size))
    delta = zn - zk
    off = ~np.eye(size, dtype=bool)
    if size > 1 and np.min(np.abs(delta[off])) < DEGENERACY_GUARD:
        raise InternalConsistencyError("Near-degenerate Airy zeros in element table.")
    # unit diagonal keeps the off-diagonal formulas finite; diagonals are overwritten
    safe = np.where(off, delta, 1.0)

    return sign, zn, zk, safe, off


def _with_diagonal(off_values: np.ndarray, diagonal: np.ndarray, off: np.ndarray) -> np.ndarray:
    matrix = np.where(off, off_values, 0.0)
    np.fill_diagonal(matrix, diagonal)
    return matrix


def _diagonals(zeros: np.ndarray) -> dict[str, np.ndarray]:
    return {
        "one": np.ones_like(zeros),
        "z": 2.0 * zeros / 3.0,
        "z2": 8.0 * zeros ** 2 / 15.0,
        "z3": 3.0 / 7.0 + 48.0 * zeros ** 3 / 105.0,
        "d": np.zeros_like(zeros),
        "d2": -zeros / 3.0,
        "d3": np.full_like(zeros, 0.5),
        "d4": zeros ** 2 / 5.0,
        "zd": np.full_like(zeros, -0.5),
    }


def verified_elements(zeros: np.ndarray) -> dict[str, np.ndarray]:
    s, zn, zk, delta, off = _grids(zeros)
    diagonal = _diagonals(zeros)
    off_diagonal = {
        "one": np.zeros_like(delta),
        "z": -2.0 * s / delta ** 2,
        "z2": -24.0 * s / delta ** 4,
        "z3": s * (24.0 * (zn + zk) / delta ** 4 - 720.0 / delta ** 6),
        "d": s / delta,
        "d2": -2.0 * s / delta ** 2,
        "d3": s * (6.0 / delta ** 3 - zk / delta),
        "d4": s * (2.0 / delta - 24.0 / delta ** 4 + 4.0 * zk / delta ** 2),
        "zd": 6.0 * s / delta ** 3,
    }

    return {name: _with_diagonal(off_diagonal[name], diagonal[name], off) for name in FAMILIES}


def printed_elements(zeros: np.ndarray) -> dict[str, np.ndarray]:
    s, zn, zk, delta, off = _grids(zeros)
    diagonal = _diagonals(zeros)
    off_diagonal = {
        "one": np.zeros_like(delta),
        "z": 2.0 * -s / delta ** 2,
        "z2": 24.0 * -s / delta ** 4,
        "z3": 24.0 * (zn + zk) * -s / delta ** 4,
        "d": s / delta,
        "d2": 2.0 * s / delta ** 2,
        "d3": (0.5 + 1.0 / (zk - zn)) * s,
        "d4": (-2.0 * (zk - zn) + 24.0 - 2.0 * zk * (zk - zn) ** 2) / (zk - zn) ** 4 * s,
    }
    elements = {name: _with_diagonal(off_diagonal[name], diagonal[name], off) for name in TABULATED_FAMILIES}
    # z d is not tabulated; derive it from the printed d^3 by the same reduction
    elements["zd"] = elements["d3"] - np.eye(len(zeros)) + elements["d"] * zeros[None, :]

    return elements


def catalog_elements(zeros: np.ndarray, catalog: str = VERIFIED) -> dict[str, np.ndarray]:
    if catalog == VERIFIED:
        return verified_elements(zeros)
    if catalog == PRINTED:
        return printed_elements(zeros)
    raise ConfigError(f"Element catalog `{catalog}` not supported!")


def element(name: str, n: int, k: int, zeros: np.ndarray, catalog: str = VERIFIED) -> float:
    """Single closed-form entry, 1-based labels."""
    if name not in FAMILIES:
        raise ConfigError(f"Element family `{name}` not supported!")
    size = max(n, k)
    if len(zeros) < size:
        raise ConfigError(f"Need {size} zeros for <{n}|{name}|{k}>, got {len(zeros)}.")
    return float(catalog_elements(np.asarray(zeros[:size], dtype=float), catalog)[name][n - 1, k - 1])
