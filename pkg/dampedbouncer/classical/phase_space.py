import numpy as np

from dampedbouncer.classical.bounce_maps import bounce_sequence
from dampedbouncer.classical.integrator import Trajectory
from dampedbouncer.classical.quantities import QUADRATIC, DissipationSpec
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.common.system_configs import PhysicalSystem

# gamma_a < gamma_b whose ascending (x, p) arcs cross, v0 = 1, m = g = 1
CROSSING_PAIR = (0.1, 0.3)
CROSSING_GRID = 4001


def _ascending_arc(traj: Trajectory, ordinate: str) -> tuple[np.ndarray, np.ndarray]:
    mask = (traj.arc == 0) & (traj.v >= 0)
    x = traj.x[mask]
    y = traj.p[mask] if ordinate == "p" else traj.v[mask]
    order = np.argsort(x, kind="stable")
    return x[order], y[order]


def find_phase_crossings(traj_a: Trajectory, traj_b: Trajectory, space: str = "xp") -> list[tuple[float, float]]:
    """Points where the first ascending arcs of two trajectories cross in (x, v) or (x, p)."""
    if space not in ("xv", "xp"):
        raise ConfigError(f"Phase space `{space}` not supported!")

    ordinate = "p" if space == "xp" else "v"
    xa, ya = _ascending_arc(traj_a, ordinate)
    xb, yb = _ascending_arc(traj_b, ordinate)
    if len(xa) < 2 or len(xb) < 2:
        return []

    lo, hi = max(xa[0], xb[0]), min(xa[-1], xb[-1])
    if hi <= lo:
        return []

    # skip the shared launch point
    grid = np.linspace(lo, hi, CROSSING_GRID)[1:]
    diff = np.interp(grid, xa, ya) - np.interp(grid, xb, yb)
    scale = max(np.max(np.abs(ya)), np.max(np.abs(yb)))
    significant = np.abs(diff) > 1e-9 * scale

    crossings = []
    previous = None
    for i in np.flatnonzero(significant):
        if previous is not None and np.sign(diff[i]) != np.sign(diff[previous]):
            x0, x1 = grid[previous], grid[i]
            d0, d1 = diff[previous], diff[i]
            x_cross = x0 - d0 * (x1 - x0) / (d1 - d0)
            crossings.append((float(x_cross), float(np.interp(x_cross, xa, ya))))
        previous = i

    return crossings


def apex_ordering(
        v0: float, gamma_a: float, gamma_b: float, sys: PhysicalSystem, cycles: int = 10
) -> tuple[list[float], list[float]]:
    """Apex heights of two quadratic-drag bounce sequences with the same launch speed."""
    seq_a = bounce_sequence(v0, DissipationSpec(QUADRATIC, gamma_a), sys, cycles)
    seq_b = bounce_sequence(v0, DissipationSpec(QUADRATIC, gamma_b), sys, cycles)
    return [x for x, _ in seq_a], [x for x, _ in seq_b]
