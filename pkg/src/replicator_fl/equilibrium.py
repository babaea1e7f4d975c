"""Interior Nash equilibrium of a zero-sum matrix game.

Each player's equilibrium mix makes the opponent indifferent across pure
strategies, so it solves a square linear system augmented with the simplex
constraint:

    [ M   -1 ] [ s ]   [ 0 ]
    [ 1'   0 ] [ v ] = [ 1 ]

with ``M = A`` for the column player's mix and ``M = A'`` for the row player's.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import NoUniqueEquilibrium, NotInterior
from .game import MixedStrategy, ZeroSumGame, _as_vector, _dot, _matvec, expected_payoff

VALUE_AGREEMENT_TOL = 1e-9
SINGULAR_COND = 1e12


@dataclass(frozen=True, eq=False)
class NashPoint:
    x_star: MixedStrategy
    y_star: MixedStrategy
    value: float

    def __post_init__(self):
        for s in (self.x_star, self.y_star):
            if np.any(s.probs <= 0.0):
                raise NotInterior(f"equilibrium component not interior: {s.probs.tolist()}")

    @property
    def n(self) -> int:
        return self.x_star.n


@dataclass(frozen=True, eq=False)
class IndifferenceReport:
    row_payoffs: np.ndarray
    col_payoffs: np.ndarray
    row_mixed: float
    col_mixed: float
    row_deltas: np.ndarray
    col_deltas: np.ndarray
    max_abs_delta: float
    tol: float

    @property
    def certified(self) -> bool:
        return self.max_abs_delta <= self.tol

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["strategy_index", "side", "pure_payoff", "mixed_payoff", "delta"])
        for side, pure, mixed, delta in (
            ("row", self.row_payoffs, self.row_mixed, self.row_deltas),
            ("col", self.col_payoffs, self.col_mixed, self.col_deltas),
        ):
            for i, (p, d) in enumerate(zip(pure, delta), start=1):
                w.writerow([i, side, format(float(p), ".17g"), format(mixed, ".17g"), format(float(d), ".17g")])
        return buf.getvalue()


def _solve_indifference(m: np.ndarray) -> tuple[np.ndarray, float]:
    n = m.shape[0]
    k = np.zeros((n + 1, n + 1))
    k[:n, :n] = m
    k[:n, n] = -1.0
    k[n, :n] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    if not np.isfinite(np.linalg.cond(k)) or np.linalg.cond(k) > SINGULAR_COND:
        raise NoUniqueEquilibrium("no unique interior equilibrium (singular indifference system)")
    sol = np.linalg.solve(k, rhs)
    return sol[:n], float(sol[n])


def solve_interior_nash(game: ZeroSumGame) -> NashPoint:
    a = game.a.entries
    y, v_row = _solve_indifference(a)
    x, v_col = _solve_indifference(a.T)
    if abs(v_row - v_col) > VALUE_AGREEMENT_TOL:
        raise NoUniqueEquilibrium(f"row/column values disagree: {v_row!r} vs {v_col!r}")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise NotInterior(f"equilibrium not interior: x={x.tolist()}, y={y.tolist()}")
    xs, ys = MixedStrategy(x), MixedStrategy(y)
    return NashPoint(xs, ys, expected_payoff(xs, game.a, ys))


def verify_nash(game: ZeroSumGame, candidate: NashPoint, tol: float = 1e-9) -> IndifferenceReport:
    """Indifference deltas at a candidate point; ``certified`` iff all within ``tol``."""
    x = _as_vector(candidate.x_star)
    y = _as_vector(candidate.y_star)
    ay = _matvec(game.a.rows, y)
    bx = _matvec(game.b.rows, x)
    row_mixed = _dot(x, ay)
    col_mixed = _dot(y, bx)
    row_d = np.array([p - row_mixed for p in ay])
    col_d = np.array([p - col_mixed for p in bx])
    worst = float(max(np.max(np.abs(row_d)), np.max(np.abs(col_d))))
    return IndifferenceReport(
        row_payoffs=np.array(ay),
        col_payoffs=np.array(bx),
        row_mixed=row_mixed,
        col_mixed=col_mixed,
        row_deltas=row_d,
        col_deltas=col_d,
        max_abs_delta=worst,
        tol=tol,
    )
