"""Lyapunov candidates, their derivatives and payoff-difference monitors.

Two candidates are tracked for every sample:

* ``V_kl``   = sum x*_i ln(x*_i / x_i) + sum y*_j ln(y*_j / y_j)
* ``V_quad`` = sum (x_i - x*_i)^2 / 2 + sum (y_j - y*_j)^2 / 2

Series are evaluated column by column with elementwise numpy operations in a
fixed order, so the bits match a scalar loop and do not depend on the BLAS or
SIMD build; logarithms go through :func:`math.log1p` for the same reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import ControllerGains, JointState, Trajectory
from .equilibrium import NashPoint
from .errors import DimensionError, DomainError
from .game import ZeroSumGame


@dataclass(frozen=True, eq=False)
class Monitors:
    v_kl: np.ndarray
    v_quad: np.ndarray
    vdot_unc: np.ndarray
    vdot_ctl: np.ndarray  # NaN when the trajectory has no gains
    pd_row: np.ndarray
    pd_col: np.ndarray


@dataclass(frozen=True)
class LyapunovSample:
    t: float
    v_kl: float
    v_quad: float
    vdot_uncontrolled: float
    vdot_controlled: float
    pd_row: tuple
    pd_col: tuple


def _rows(state):
    if isinstance(state, Trajectory):
        return state.x, state.y
    if isinstance(state, JointState):
        return state.x.probs[None, :], state.y.probs[None, :]
    raise TypeError(f"expected JointState or Trajectory, got {type(state).__name__}")


def _target(target: NashPoint, n: int):
    if target.n != n:
        raise DimensionError(f"target has {target.n} strategies, state has {n}")
    return target.x_star.probs.tolist(), target.y_star.probs.tolist()


def _matcols(m_rows, cols):
    """Row i of the result is sum_j m[i][j] * cols[:, j], accumulated left to right."""
    out = []
    for row in m_rows:
        acc = np.zeros(cols.shape[0])
        for j, mij in enumerate(row):
            acc = acc + mij * cols[:, j]
        out.append(acc)
    return out


def _kl_series(xs, ys, x, y, times=None):
    for arr in (x, y):
        if np.any(arr <= 0.0):
            idx = int(np.argmax(np.any(arr <= 0.0, axis=1)))
            t = None if times is None else float(times[idx])
            raise DomainError("KL divergence needs strictly interior states", t=t, index=idx)
    acc = np.zeros(x.shape[0])
    for targ, cols in ((xs, x), (ys, y)):
        for j, p in enumerate(targ):
            acc = acc + p * _r_minus_log1p((cols[:, j] - p) / p)
    return acc


_SERIES_CUTOFF = 1e-2


def _r_minus_log1p(r: np.ndarray) -> np.ndarray:
    """``r - log(1 + r)`` without cancellation for small ``|r|``.

    Summing ``p * (r - log1p(r))`` with ``r = (x - p) / p`` over a player gives
    ``sum p ln(p/x) + sum x - sum p``, i.e. the KL divergence on the simplex,
    but every term is non-negative and keeps full relative precision near the
    target.
    """
    out = np.array([ri - math.log1p(ri) for ri in r.tolist()])
    small = np.abs(r) < _SERIES_CUTOFF
    if np.any(small):
        rs = r[small]
        # r^2/2 - r^3/3 + ... - r^9/9 + r^10/10
        poly = np.full(rs.shape, 1.0 / 10)
        for k in range(9, 1, -1):
            poly = 1.0 / k - rs * poly
        out[small] = rs * rs * poly
    return out


def _quad_series(xs, ys, x, y):
    acc = np.zeros(x.shape[0])
    for targ, cols in ((xs, x), (ys, y)):
        for j, p in enumerate(targ):
            d = cols[:, j] - p
            acc = acc + 0.5 * (d * d)
    return acc


def _vdot_unc_series(game, xs, ys, x, y):
    # -(x* - x)' A (y - y*)
    dx = np.stack([p - x[:, j] for j, p in enumerate(xs)], axis=1)
    dy = np.stack([y[:, j] - p for j, p in enumerate(ys)], axis=1)
    a_dy = _matcols(game.a.rows, dy)
    acc = np.zeros(x.shape[0])
    for i, col in enumerate(a_dy):
        acc = acc + dx[:, i] * col
    return -acc


def _vdot_ctl_series(gains: ControllerGains, xs, ys, x, y):
    acc = np.zeros(x.shape[0])
    for g_vec, targ, cols in ((gains.k.tolist(), xs, x), (gains.c.tolist(), ys, y)):
        for j, (g, p) in enumerate(zip(g_vec, targ)):
            d = cols[:, j] - p
            acc = acc - g * (d * d)
    return acc


def _pd_series(game, x, y):
    ay = _matcols(game.a.rows, y)
    bx = _matcols(game.b.rows, x)
    xay = np.zeros(x.shape[0])
    for i, col in enumerate(ay):
        xay = xay + x[:, i] * col
    ybx = np.zeros(y.shape[0])
    for j, col in enumerate(bx):
        ybx = ybx + y[:, j] * col
    pd_row = np.stack([col - xay for col in ay], axis=1)
    pd_col = np.stack([col - ybx for col in bx], axis=1)
    return pd_row, pd_col


def kl_divergence(target: NashPoint, state: JointState) -> float:
    x, y = _rows(state)
    xs, ys = _target(target, x.shape[1])
    try:
        return float(_kl_series(xs, ys, x, y)[0])
    except DomainError:
        raise DomainError("KL divergence needs strictly interior states", t=state.t) from None


def quadratic_lyapunov(target: NashPoint, state: JointState) -> float:
    x, y = _rows(state)
    xs, ys = _target(target, x.shape[1])
    return float(_quad_series(xs, ys, x, y)[0])


def vdot_uncontrolled(game: ZeroSumGame, target: NashPoint, state: JointState) -> float:
    """Closed-form ``-(x* - x)' A (y - y*)`` for the uncontrolled flow.

    Diagnostic only: along the exact flow the KL candidate is conserved; see
    :func:`conservation_check` for the quantity that is actually tested.
    """
    x, y = _rows(state)
    xs, ys = _target(target, x.shape[1])
    if game.n != x.shape[1]:
        raise DimensionError("game and state dimensions differ")
    return float(_vdot_unc_series(game, xs, ys, x, y)[0])


def vdot_controlled(gains: ControllerGains, target: NashPoint, state: JointState) -> float:
    """Time derivative of ``V_quad`` along the closed loop: ``-sum k d_x^2 - sum c d_y^2``."""
    x, y = _rows(state)
    xs, ys = _target(target, x.shape[1])
    if gains.n != x.shape[1]:
        raise DimensionError("gains and state dimensions differ")
    return float(_vdot_ctl_series(gains, xs, ys, x, y)[0])


def payoff_differences(game: ZeroSumGame, state: JointState) -> tuple[np.ndarray, np.ndarray]:
    x, y = _rows(state)
    if game.n != x.shape[1]:
        raise DimensionError("game and state dimensions differ")
    pd_row, pd_col = _pd_series(game, x, y)
    return pd_row[0], pd_col[0]


def annotate_trajectory(game: ZeroSumGame, target: NashPoint, gains, trajectory: Trajectory) -> Trajectory:
    """Return a copy of ``trajectory`` with every monitor column filled in."""
    x, y = trajectory.x, trajectory.y
    if game.n != trajectory.n:
        raise DimensionError("game and trajectory dimensions differ")
    xs, ys = _target(target, trajectory.n)
    v_kl = _kl_series(xs, ys, x, y, trajectory.t)
    v_quad = _quad_series(xs, ys, x, y)
    vdot_unc = _vdot_unc_series(game, xs, ys, x, y)
    if gains is None:
        vdot_ctl = np.full(len(trajectory), np.nan)
    else:
        vdot_ctl = _vdot_ctl_series(gains, xs, ys, x, y)
    pd_row, pd_col = _pd_series(game, x, y)
    arrays = (v_kl, v_quad, vdot_unc, vdot_ctl, pd_row, pd_col)
    for arr in arrays:
        arr.setflags(write=False)
    return replace(trajectory, monitors=Monitors(*arrays))


def lyapunov_sample(trajectory: Trajectory, i: int) -> LyapunovSample:
    m = trajectory.monitors
    if m is None:
        raise ValueError("trajectory has not been annotated")
    return LyapunovSample(
        t=float(trajectory.t[i]),
        v_kl=float(m.v_kl[i]),
        v_quad=float(m.v_quad[i]),
        vdot_uncontrolled=float(m.vdot_unc[i]),
        vdot_controlled=float(m.vdot_ctl[i]),
        pd_row=tuple(m.pd_row[i].tolist()),
        pd_col=tuple(m.pd_col[i].tolist()),
    )


def conservation_check(game: ZeroSumGame, target: NashPoint, trajectory: Trajectory) -> float:
    """Largest excursion of ``V_kl`` from its initial value along the trajectory."""
    if trajectory.monitors is not None:
        v = trajectory.monitors.v_kl
    else:
        xs, ys = _target(target, trajectory.n)
        v = _kl_series(xs, ys, trajectory.x, trajectory.y, trajectory.t)
    return float(np.max(np.abs(v - v[0])))


def count_sign_changes(series) -> int:
    """Number of strict sign flips, skipping exact zeros."""
    s = np.sign(np.asarray(series, dtype=float))
    s = s[s != 0.0]
    return int(np.count_nonzero(s[1:] != s[:-1]))
