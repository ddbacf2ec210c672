import logging
from typing import Callable

from dampedbouncer.common.errors import ConvergenceError, DomainError

MAX_ITERATIONS = 200
RELATIVE_TOLERANCE = 1e-12


def newton_bisect(
        func: Callable[[float], float], dfunc: Callable[[float], float], lo: float, hi: float,
        rtol: float = RELATIVE_TOLERANCE, atol: float = 0.0, max_iter: int = MAX_ITERATIONS
) -> tuple[float, int]:
    """Root of `func` in [lo, hi] by Newton steps kept inside a shrinking bracket.

    A Newton step that would leave the bracket, or that does not halve the
    interval fast enough, is replaced by a bisection step.
    Returns the root and the number of iterations used.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo, 0
    if f_hi == 0.0:
        return hi, 0
    if f_lo * f_hi > 0.0:
        raise DomainError(f"Root is not bracketed in [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}.")

    # orient so that func(x_lo) < 0
    if f_lo < 0.0:
        x_lo, x_hi = lo, hi
    else:
        x_lo, x_hi = hi, lo

    root = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    f = func(root)
    df = dfunc(root)

    for it in range(1, max_iter + 1):
        out_of_bracket = ((root - x_hi) * df - f) * ((root - x_lo) * df - f) > 0.0
        if out_of_bracket or df == 0.0 or abs(2.0 * f) > abs(dx_old * df):
            dx_old = dx
            dx = 0.5 * (x_hi - x_lo)
            root = x_lo + dx
        else:
            dx_old = dx
            dx = f / df
            root -= dx

        if abs(dx) <= max(atol, rtol * abs(root)):
            return root, it

        f = func(root)
        df = dfunc(root)
        if f == 0.0:
            return root, it
        if f < 0.0:
            x_lo = root
        else:
            x_hi = root

    logging.warning(f"Bracketed Newton did not converge in [{lo}, {hi}], last estimate {root}.")
    raise ConvergenceError(f"Bracketed Newton did not converge in [{lo}, {hi}]", iterations=max_iter)
