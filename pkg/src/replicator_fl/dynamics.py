"""Replicator vector fields, the feedback-linearizing controller and the integrator.

The controlled field adds ``u = -f(x) - k*(x - x*)`` to the replicator drift
``f``, which leaves the decoupled linear error dynamics ``-k*(x - x*)`` (and the
same for the column player with gains ``c``). Simulation is a fixed-step RK4
with a clip-and-renormalize safeguard after every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .equilibrium import NashPoint
from .errors import DimensionError, IntegrationError
from .game import MixedStrategy, ZeroSumGame, _as_vector, _check_len
from .rng import GaussianStream

DEFAULT_DT = 1e-3
DEFAULT_T_FINAL = {"uncontrolled": 200.0, "controlled": 40.0}
DEFAULT_GAIN = 0.5
DEFAULT_EPSILON = 1e-9
MODES = ("uncontrolled", "controlled")


@dataclass(frozen=True, eq=False)
class JointState:
    t: float
    x: MixedStrategy
    y: MixedStrategy

    def __post_init__(self):
        if self.x.n != self.y.n:
            raise DimensionError(f"player dimensions differ: {self.x.n} vs {self.y.n}")

    @classmethod
    def of(cls, x, y, t: float = 0.0) -> "JointState":
        return cls(float(t), _strategy(x), _strategy(y))

    def flat(self) -> list[float]:
        return self.x.probs.tolist() + self.y.probs.tolist()


def _strategy(v) -> MixedStrategy:
    return v if isinstance(v, MixedStrategy) else MixedStrategy(v)


@dataclass(frozen=True, eq=False)
class ControllerGains:
    k: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=float).reshape(-1)
        c = np.array(self.c, dtype=float).reshape(-1)
        if k.size != c.size:
            raise DimensionError("row and column gain vectors differ in length")
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(c))):
            raise ValueError("gains must be finite")
        if np.any(k <= 0.0) or np.any(c <= 0.0):
            raise ValueError("controller gains must be strictly positive")
        k.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "c", c)

    @classmethod
    def uniform(cls, n: int, k: float = DEFAULT_GAIN, c: Optional[float] = None) -> "ControllerGains":
        return cls(np.full(n, float(k)), np.full(n, float(k if c is None else c)))

    @property
    def n(self) -> int:
        return self.k.size

    def flat(self) -> list[float]:
        return self.k.tolist() + self.c.tolist()


@dataclass(frozen=True, eq=False)
class SimConfig:
    mode: str
    target: NashPoint
    initial: JointState
    dt: float = DEFAULT_DT
    t_final: Optional[float] = None
    gains: Optional[ControllerGains] = None
    simplex_epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t_final is None:
            object.__setattr__(self, "t_final", DEFAULT_T_FINAL[self.mode])
        if not (self.dt > 0.0 and self.t_final > 0.0):
            raise ValueError("dt and t_final must be positive")
        if self.dt > self.t_final:
            raise ValueError("dt must not exceed t_final")
        if self.mode == "controlled" and self.gains is None:
            raise ValueError("controlled mode requires gains")
        n = self.target.n
        if self.initial.x.n != n or (self.gains is not None and self.gains.n != n):
            raise DimensionError("config dimensions do not match the target")
        if not 0.0 < self.simplex_epsilon < 1.0 / n:
            raise ValueError("simplex_epsilon must lie in (0, 1/n)")

    @property
    def steps(self) -> int:
        return int(round(self.t_final / self.dt))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples at ``t = i*dt``; ``x`` and ``y`` have one row per sample."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    dt: float
    monitors: object = field(default=None)

    def __len__(self):
        return self.t.size

    @property
    def n(self) -> int:
        return self.x.shape[1]

    def state(self, i: int) -> JointState:
        return JointState(float(self.t[i]), MixedStrategy(self.x[i]), MixedStrategy(self.y[i]))

    @property
    def samples(self) -> list[JointState]:
        return [self.state(i) for i in range(len(self))]

    @property
    def final(self) -> JointState:
        return self.state(len(self) - 1)


# ---------------------------------------------------------------------------
# scalar kernels over flat [x..., y...] lists

def _replicator_kernel(game: ZeroSumGame) -> Callable[[Sequence[float]], list[float]]:
    a_rows, b_rows, n = game.a.rows, game.b.rows, game.n

    def f(z):
        x = z[:n]
        y = z[n:]
        ay = []
        for row in a_rows:
            s = 0.0
            for aij, yj in zip(row, y):
                s += aij * yj
            ay.append(s)
        bx = []
        for row in b_rows:
            s = 0.0
            for bij, xj in zip(row, x):
                s += bij * xj
            bx.append(s)
        xay = 0.0
        for xi, p in zip(x, ay):
            xay += xi * p
        ybx = 0.0
        for yi, p in zip(y, bx):
            ybx += yi * p
        return [xi * (p - xay) for xi, p in zip(x, ay)] + [yi * (p - ybx) for yi, p in zip(y, bx)]

    return f


def _control_kernel(drift, target: Sequence[float], gains: Sequence[float]):
    def u(z):
        dz = drift(z)
        return [-d - g * (zi - ti) for d, g, zi, ti in zip(dz, gains, z, target)], dz

    return u


def _controlled_kernel(drift, target, gains):
    control = _control_kernel(drift, target, gains)

    def f(z):
        u, dz = control(z)
        return [d + ui for d, ui in zip(dz, u)]

    return f


def _project(raw: Sequence[float], epsilon: float) -> list[float]:
    if all(v <= 0.0 for v in raw):
        raise ValueError("cannot project a vector with no positive component")
    clipped = [v if v >= epsilon else epsilon for v in raw]
    s = 0.0
    for v in clipped:
        s += v
    return [v / s for v in clipped]


# ---------------------------------------------------------------------------
# public operations

def _split(state_or_x, y=None):
    if isinstance(state_or_x, JointState):
        return state_or_x.flat()
    return _as_vector(state_or_x) + _as_vector(y)


def replicator_field(game: ZeroSumGame, x, y) -> tuple[np.ndarray, np.ndarray]:
    xv, yv = _as_vector(x), _as_vector(y)
    _check_len(game.n, xv, yv)
    dz = _replicator_kernel(game)(xv + yv)
    n = game.n
    return np.array(dz[:n]), np.array(dz[n:])


def _check_control_dims(game, z, target, gains):
    n = game.n
    if len(z) != 2 * n or target.n != n or gains.n != n:
        raise DimensionError("state, target and gains must match the game dimension")


def control_inputs(game: ZeroSumGame, state: JointState, target: NashPoint,
                   gains: ControllerGains) -> tuple[np.ndarray, np.ndarray]:
    """Cancel the replicator drift and add a linear pull toward ``target``."""
    z = _split(state)
    _check_control_dims(game, z, target, gains)
    tgt = target.x_star.probs.tolist() + target.y_star.probs.tolist()
    u, _ = _control_kernel(_replicator_kernel(game), tgt, gains.flat())(z)
    n = game.n
    return np.array(u[:n]), np.array(u[n:])


def controlled_field(game: ZeroSumGame, state: JointState, target: NashPoint,
                     gains: ControllerGains) -> tuple[np.ndarray, np.ndarray]:
    z = _split(state)
    _check_control_dims(game, z, target, gains)
    tgt = target.x_star.probs.tolist() + target.y_star.probs.tolist()
    dz = _controlled_kernel(_replicator_kernel(game), tgt, gains.flat())(z)
    n = game.n
    return np.array(dz[:n]), np.array(dz[n:])


def rk4_step(field: Callable[[Sequence[float]], Sequence[float]], t: float,
             z: Sequence[float], dt: float) -> tuple[float, list[float]]:
    """One classical Runge-Kutta step of the autonomous system ``z' = field(z)``.

    Works on any flat float vector; no simplex projection is applied here.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    h2 = 0.5 * dt
    h6 = dt / 6.0
    k1 = field(z)
    k2 = field([zi + h2 * d for zi, d in zip(z, k1)])
    k3 = field([zi + h2 * d for zi, d in zip(z, k2)])
    k4 = field([zi + dt * d for zi, d in zip(z, k3)])
    nxt = [zi + h6 * (a + 2.0 * b + 2.0 * c + d) for zi, a, b, c, d in zip(z, k1, k2, k3, k4)]
    for v in nxt:
        if not math.isfinite(v):
            raise IntegrationError("non-finite derivative during RK4 step", t)
    return t + dt, nxt


def project_to_simplex(raw, epsilon: float = DEFAULT_EPSILON) -> MixedStrategy:
    """Clip components to at least ``epsilon`` and renormalize."""
    v = _as_vector(raw)
    if not 0.0 < epsilon < 1.0 / len(v):
        raise ValueError("epsilon must lie in (0, 1/n)")
    if not all(math.isfinite(c) for c in v):
        raise ValueError("cannot project a non-finite vector")
    return MixedStrategy(_project(v, epsilon))


def perturb_equilibrium(target: NashPoint, sigma: float, seed: int,
                        epsilon: float = DEFAULT_EPSILON) -> JointState:
    """Add N(0, sigma^2) noise to every equilibrium component, then project.

    x components draw first, then y, from one :class:`GaussianStream`.
    """
    if sigma < 0.0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0.0:
        return JointState(0.0, target.x_star, target.y_star)
    n = target.n
    noise = GaussianStream(seed).normals(2 * n)
    x = [p + sigma * e for p, e in zip(target.x_star.probs.tolist(), noise[:n])]
    y = [p + sigma * e for p, e in zip(target.y_star.probs.tolist(), noise[n:])]
    return JointState(0.0, project_to_simplex(x, epsilon), project_to_simplex(y, epsilon))


def simulate(game: ZeroSumGame, config: SimConfig) -> Trajectory:
    n = game.n
    if config.target.n != n:
        raise DimensionError("config does not match the game dimension")
    drift = _replicator_kernel(game)
    if config.mode == "controlled":
        tgt = config.target.x_star.probs.tolist() + config.target.y_star.probs.tolist()
        f = _controlled_kernel(drift, tgt, config.gains.flat())
    else:
        f = drift

    steps = config.steps
    dt = config.dt
    eps = config.simplex_epsilon
    out = np.empty((steps + 1, 2 * n))
    z = config.initial.flat()
    out[0] = z
    t0 = config.initial.t
    for i in range(1, steps + 1):
        t_prev = t0 + (i - 1) * dt
        _, raw = rk4_step(f, t_prev, z, dt)
        z = _project(raw[:n], eps) + _project(raw[n:], eps)
        out[i] = z
    t = t0 + np.arange(steps + 1) * dt
    for arr in (t, out):
        arr.setflags(write=False)
    return Trajectory(t=t, x=out[:, :n], y=out[:, n:], dt=dt)
