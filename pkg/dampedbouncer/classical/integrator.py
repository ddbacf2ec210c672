import logging
import math
from dataclasses import dataclass, field

import numpy as np

from dampedbouncer.classical.quantities import LINEAR, Branch, DissipationSpec, acceleration, constant_of_motion, \
    momentum
from dampedbouncer.common.errors import ConfigError, ConvergenceError, DomainError
from dampedbouncer.common.system_configs import PhysicalSystem

STEPS_PER_CYCLE = 2000
EVENT_TOLERANCE = 1e-12
MAX_EVENT_ITERATIONS = 200


@dataclass(frozen=True)
class Bounce:
    t: float
    speed: float


@dataclass(frozen=True)
class Apex:
    t: float
    x: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled flight of the bouncer.

    `arc` counts flights between wall hits, `branch` is +1 on the way up, -1 on
    the way down (quadratic law) and 0 for the linear law; the apex sample opens
    the descending branch.
    """
    spec: DissipationSpec
    sys: PhysicalSystem
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    p: np.ndarray
    conserved: np.ndarray
    arc: np.ndarray
    branch: np.ndarray
    bounces: tuple[Bounce, ...] = field(default_factory=tuple)
    apexes: tuple[Apex, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def apex_heights(self) -> list[float]:
        return [apex.x for apex in self.apexes]

    def segments(self) -> list[np.ndarray]:
        """Sample indices of each (arc, branch) piece on which the constant of motion is conserved."""
        keys = self.arc.astype(np.int64) * 4 + (self.branch.astype(np.int64) + 1)
        boundaries = np.flatnonzero(np.diff(keys)) + 1
        return np.split(np.arange(len(self.t)), boundaries)

    def arc_drift(self) -> float:
        """Largest relative variation of the constant of motion within one piece."""
        drift = 0.0
        for indices in self.segments():
            values = self.conserved[indices]
            values = values[np.isfinite(values)]
            if len(values) < 2:
                continue
            scale = max(abs(values[0]), np.finfo(float).tiny)
            drift = max(drift, float((values.max() - values.min()) / scale))
        return drift

    def rows(self) -> list[dict]:
        rows = []
        for i in range(len(self.t)):
            rows.append({
                't': float(self.t[i]),
                'x': float(self.x[i]),
                'v': float(self.v[i]),
                'p': float(self.p[i]),
                'K_or_H': float(self.conserved[i]),
                'arc': int(self.arc[i]),
                'branch': {1: 'up', -1: 'down', 0: ''}[int(self.branch[i])],
            })
        return rows


def cycle_estimate(x0: float, v0: float, sys: PhysicalSystem) -> float:
    """Flight time of the conservative bounce with the same energy."""
    return 2.0 * math.sqrt(v0 ** 2 + 2.0 * sys.g * x0) / sys.g


class _Integrator:
    __slots__ = ['_spec', '_sys', '_warned', '_t', '_x', '_v', '_p', '_conserved', '_arc', '_branch']

    def __init__(self, spec: DissipationSpec, sys: PhysicalSystem) -> None:
        self._spec: DissipationSpec = spec
        self._sys: PhysicalSystem = sys
        self._warned: bool = False
        self._t: list[float] = []
        self._x: list[float] = []
        self._v: list[float] = []
        self._p: list[float] = []
        self._conserved: list[float] = []
        self._arc: list[int] = []
        self._branch: list[int] = []

    def _rhs(self, v: float) -> float:
        return acceleration(v, self._spec, self._sys)

    def rk4(self, x: float, v: float, h: float) -> tuple[float, float]:
        k1x, k1v = v, self._rhs(v)
        k2x, k2v = v + 0.5 * h * k1v, self._rhs(v + 0.5 * h * k1v)
        k3x, k3v = v + 0.5 * h * k2v, self._rhs(v + 0.5 * h * k2v)
        k4x, k4v = v + h * k3v, self._rhs(v + h * k3v)
        return (
            x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
            v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v),
        )

    @staticmethod
    def _hermite(y0: float, y1: float, d0: float, d1: float, h: float, theta: float) -> float:
        t2 = theta * theta
        t3 = t2 * theta
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h * d0 \
            + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1

    def locate(self, y0: float, y1: float, d0: float, d1: float, h: float, scale: float) -> float:
        """Fraction of the step at which the cubic Hermite interpolant of y crosses zero."""
        lo, hi = 0.0, 1.0
        for _ in range(MAX_EVENT_ITERATIONS):
            mid = 0.5 * (lo + hi)
            y_mid = self._hermite(y0, y1, d0, d1, h, mid)
            if abs(y_mid) <= EVENT_TOLERANCE * scale or (hi - lo) * abs(h) < 1e-16 * max(1.0, abs(h)):
                return mid
            if (y_mid > 0) == (y0 > 0):
                lo = mid
            else:
                hi = mid

        raise ConvergenceError(f"Event bracketing did not converge within step h={h}", iterations=MAX_EVENT_ITERATIONS)

    def record(self, t: float, x: float, v: float, arc: int, branch: int) -> None:
        p, conserved = self._observables(x, v, branch)
        self._t.append(t)
        self._x.append(x)
        self._v.append(v)
        self._p.append(p)
        self._conserved.append(conserved)
        self._arc.append(arc)
        self._branch.append(branch)

    def _observables(self, x: float, v: float, branch: int) -> tuple[float, float]:
        spec, sys = self._spec, self._sys
        try:
            # the apex sample (v = 0) belongs to the descending branch
            side = None if spec.law == LINEAR else Branch.UP if branch > 0 else Branch.DOWN
            return momentum(x, v, spec, sys, side), constant_of_motion(x, v, spec, sys, side)
        except DomainError as e:
            if not self._warned:
                logging.warning(f"Sample (x={x}, v={v}) outside the domain of the constant of motion: {e}")
                self._warned = True
            return math.nan, math.nan

    @property
    def sample_count(self) -> int:
        return len(self._t)

    def trajectory(self, bounces: list[Bounce], apexes: list[Apex]) -> Trajectory:
        return Trajectory(
            spec=self._spec,
            sys=self._sys,
            t=np.array(self._t),
            x=np.array(self._x),
            v=np.array(self._v),
            p=np.array(self._p),
            conserved=np.array(self._conserved),
            arc=np.array(self._arc, dtype=np.int64),
            branch=np.array(self._branch, dtype=np.int8),
            bounces=tuple(bounces),
            apexes=tuple(apexes),
        )


def integrate(
        x0: float, v0: float, spec: DissipationSpec, sys: PhysicalSystem, t_end: float | None = None,
        dt: float | None = None, max_bounces: int | None = None
) -> Trajectory:
    """Integrate the damped bouncer with RK4, reflecting elastically at the wall x = 0.

    Wall hits and apexes are located on the cubic Hermite interpolant of the step and
    reached with a partial RK4 step, so every apex and every bounce is a sample.
    Stops at `t_end` or right after the `max_bounces`-th reflection, whichever comes first.
    """
    if x0 < 0:
        raise DomainError(f"Initial height must be >= 0, got x0={x0}.")
    if t_end is None and max_bounces is None:
        raise ConfigError("Either `t_end` or `max_bounces` must be given.")
    if v0 ** 2 + 2 * sys.g * x0 == 0:
        raise DomainError("Particle at rest on the wall: nothing to integrate.")
    if dt is None:
        dt = cycle_estimate(x0, v0, sys) / STEPS_PER_CYCLE
    if dt <= 0 or not math.isfinite(dt):
        raise ConfigError(f"Time step must be positive, got dt={dt}.")

    quadratic = spec.law != LINEAR
    engine = _Integrator(spec, sys)
    bounces: list[Bounce] = []
    apexes: list[Apex] = []

    def side(v: float) -> int:
        if not quadratic:
            return 0
        return 1 if v > 0 else -1

    t, x, v, arc = 0.0, float(x0), float(v0), 0
    if x == 0.0 and v < 0.0:
        bounces.append(Bounce(t=0.0, speed=-v))
        v = -v
    engine.record(t, x, v, arc, side(v))

    while t_end is None or t < t_end:
        h = dt if t_end is None else min(dt, t_end - t)
        if h <= 0:
            break
        x1, v1 = engine.rk4(x, v, h)

        if v > 0.0 and v1 <= 0.0:
            a0, a1 = acceleration(v, spec, sys), acceleration(v1, spec, sys)
            theta = engine.locate(v, v1, a0, a1, h, max(abs(v), abs(v1)))
            x_apex, _ = engine.rk4(x, v, theta * h)
            t, x, v = t + theta * h, x_apex, 0.0
            apexes.append(Apex(t=t, x=x))
            engine.record(t, x, v, arc, side(-1.0))
            continue

        if x1 < 0.0:
            theta = engine.locate(x, x1, v, v1, h, max(abs(x), abs(x1), abs(v1) * h))
            _, v_wall = engine.rk4(x, v, theta * h)
            t, x = t + theta * h, 0.0
            engine.record(t, x, v_wall, arc, side(v_wall))
            bounces.append(Bounce(t=t, speed=-v_wall))
            arc += 1
            v = -v_wall
            engine.record(t, x, v, arc, side(v))
            if max_bounces is not None and len(bounces) >= max_bounces:
                break
            continue

        t, x, v = t + h, x1, v1
        engine.record(t, x, v, arc, side(v) if v != 0.0 else side(-1.0))

    logging.debug(f"Integrated {engine.sample_count} samples, {len(bounces)} bounces, {len(apexes)} apexes.")

    return engine.trajectory(bounces, apexes)
