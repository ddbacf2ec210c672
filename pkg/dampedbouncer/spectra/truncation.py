"""Outward accumulation of the second-order sums over k != n with a tail estimate."""
import math
from dataclasses import dataclass

import numpy as np

from dampedbouncer.common.errors import DomainError

STOP_RELATIVE = 1e-12
STOP_RUN = 10
TAIL_TOLERANCE = 1e-2
MIN_FIT_TERMS = 8


@dataclass(frozen=True)
class TruncatedSum:
    value: float
    terms_used: int
    tail_estimate: float
    decay_exponent: float
    stopped_early: bool

    def converged(self, reference: float, tail_tol: float = TAIL_TOLERANCE) -> bool:
        return self.tail_estimate <= tail_tol * abs(reference)


def outward_order(n: int, size: int) -> list[int]:
    """k = n-1, n+1, n-2, n+2, ... restricted to 1..size."""
    order = []
    for distance in range(1, size):
        for k in (n - distance, n + distance):
            if 1 <= k <= size:
                order.append(k)
    return order


def power_law_tail(labels: np.ndarray, terms: np.ndarray) -> tuple[float, float]:
    """Fit |t_k| ~ C k^-p over the upper half of the terms above n and integrate past the last one.

    Returns (tail, p); p <= 1 means the sum diverges and the tail is infinite.
    """
    keep = np.abs(terms) > 0
    labels, terms = labels[keep], np.abs(terms[keep])
    if len(labels) < MIN_FIT_TERMS:
        return 0.0 if len(labels) == 0 else math.inf, math.nan

    half = len(labels) // 2
    slope, _ = np.polyfit(np.log(labels[half:]), np.log(terms[half:]), 1)
    p = -float(slope)
    if p <= 1.0:
        return math.inf, p

    last_k, last_term = float(labels[-1]), float(terms[-1])
    return last_term * last_k / (p - 1.0), p


def accumulate(n: int, terms: np.ndarray, min_range: int | None = None) -> TruncatedSum:
    """Sum `terms[k - 1]` over k != n outward from n.

    Stops once the last STOP_RUN terms each fall below STOP_RELATIVE of the running
    sum and k has reached `min_range` (default 4n); otherwise uses every term.
    """
    size = len(terms)
    if not 1 <= n <= size:
        raise DomainError(f"Level n={n} outside 1..{size}.")
    min_range = 4 * n if min_range is None else min_range

    total = 0.0
    run = 0
    used = 0
    reach = n
    stopped = False
    for k in outward_order(n, size):
        term = float(terms[k - 1])
        total += term
        used += 1
        reach = max(reach, k)
        run = run + 1 if abs(term) < STOP_RELATIVE * abs(total) else 0
        if run >= STOP_RUN and reach >= min_range:
            stopped = True
            break

    if stopped:
        return TruncatedSum(total, used, 0.0, math.nan, True)

    upper = np.arange(n + 1, size + 1)
    tail, p = power_law_tail(upper.astype(float), np.asarray(terms[n:], dtype=float))

    return TruncatedSum(total, used, tail, p, False)
