"""Matrix-game data types, payoff evaluation and the symmetric-part spectrum.

Arithmetic in the scalar kernels (``_dot``, ``_matvec``) runs on Python floats
with a fixed summation order so results do not depend on the BLAS build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ContractViolation, DimensionError

SIMPLEX_SUM_TOL = 1e-9
NORMALIZE_TOL = 1e-6
JACOBI_TOL = 1e-12
SYMMETRY_TOL = 1e-12
DEFINITENESS_ZERO_TOL = 1e-10

DEFINITENESS_CLASSES = (
    "positive-definite",
    "positive-semidefinite",
    "negative-definite",
    "negative-semidefinite",
    "indefinite",
)


def _dot(u, v):
    s = 0.0
    for a, b in zip(u, v):
        s += a * b
    return s


def _matvec(rows, v):
    return [_dot(row, v) for row in rows]


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """Square payoff table for the row player.

    With ``probabilistic=True`` the entries must lie in [0, 1] and the
    diagonal must be zero (the penalty-kick reading of the payoffs).
    """

    entries: np.ndarray
    probabilistic: bool = False

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"payoff matrix must be square, got shape {arr.shape}")
        if arr.shape[0] < 2:
            raise DimensionError("payoff matrix needs at least 2 strategies")
        if not np.all(np.isfinite(arr)):
            raise ValueError("payoff entries must be finite")
        if self.probabilistic:
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise ValueError("probabilistic payoffs must lie in [0, 1]")
            if np.any(np.diag(arr) != 0.0):
                raise ValueError("probabilistic payoffs require a zero diagonal")
        object.__setattr__(self, "entries", _frozen(arr))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def rows(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(float(v) for v in row) for row in self.entries)

    def __repr__(self):
        return f"PayoffMatrix({self.entries.tolist()!r})"


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """A point on the probability simplex.

    Inputs whose sum is off by at most 1e-6 are renormalized; larger
    deviations and negative components are rejected.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(-1)
        if p.size == 0:
            raise DimensionError("strategy must have at least one component")
        if not np.all(np.isfinite(p)):
            raise ValueError("strategy components must be finite")
        if np.any(p < 0.0):
            raise ValueError(f"strategy components must be >= 0, got {p.tolist()}")
        total = float(math.fsum(p))
        if abs(total - 1.0) > NORMALIZE_TOL:
            raise ValueError(f"strategy components sum to {total!r}, not 1")
        if total != 1.0:
            p = p / total
        object.__setattr__(self, "probs", _frozen(p))

    @property
    def n(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def pure(cls, n: int, i: int) -> "MixedStrategy":
        p = np.zeros(n)
        p[i] = 1.0
        return cls(p)

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"MixedStrategy({self.probs.tolist()!r})"


@dataclass(frozen=True, eq=False)
class ZeroSumGame:
    a: PayoffMatrix
    b: PayoffMatrix

    def __post_init__(self):
        if self.a.n != self.b.n:
            raise DimensionError(f"player dimensions differ: {self.a.n} vs {self.b.n}")
        if not np.array_equal(self.b.entries, -self.a.entries.T):
            raise ContractViolation("zero-sum game requires b == -a.T exactly")

    @property
    def n(self) -> int:
        return self.a.n


@dataclass(frozen=True, eq=False)
class SpectralReport:
    symmetrized: PayoffMatrix
    eigenvalues: np.ndarray
    definiteness: str


def _as_matrix(a) -> PayoffMatrix:
    return a if isinstance(a, PayoffMatrix) else PayoffMatrix(a)


def _as_vector(v) -> list[float]:
    if isinstance(v, MixedStrategy):
        return v.probs.tolist()
    return [float(c) for c in np.asarray(v, dtype=float).reshape(-1)]


def _check_len(n, *vectors):
    for v in vectors:
        if len(v) != n:
            raise DimensionError(f"expected length {n}, got {len(v)}")


def build_zero_sum(a) -> ZeroSumGame:
    """Pair ``a`` with the column player's matrix ``-a.T``."""
    a = _as_matrix(a)
    b = PayoffMatrix(-a.entries.T)
    return ZeroSumGame(a, b)


def payoff_vector(a, y) -> np.ndarray:
    """Pure-strategy payoffs ``(A y)_i`` against the mixed strategy ``y``."""
    a = _as_matrix(a)
    yv = _as_vector(y)
    _check_len(a.n, yv)
    return np.array(_matvec(a.rows, yv))


def expected_payoff(x, a, y) -> float:
    a = _as_matrix(a)
    xv, yv = _as_vector(x), _as_vector(y)
    _check_len(a.n, xv, yv)
    return _dot(xv, _matvec(a.rows, yv))


def zero_sum_residual(game: ZeroSumGame, x, y) -> float:
    """``x'Ay + y'Bx``; identically zero when ``B = -A'``."""
    return expected_payoff(x, game.a, y) + expected_payoff(y, game.b, x)


def symmetrize(a) -> PayoffMatrix:
    a = _as_matrix(a)
    return PayoffMatrix((a.entries + a.entries.T) / 2.0)


def symmetric_eigenvalues(s, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending."""
    s = _as_matrix(s)
    m = np.array(s.entries, dtype=float)
    if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise ContractViolation("symmetric_eigenvalues requires a symmetric matrix")
    n = m.shape[0]
    thresh = tol * max(1.0, float(np.linalg.norm(m)))

    def off_norm():
        off = m - np.diag(np.diag(m))
        return math.sqrt(float(np.sum(off * off)))

    for _ in range(max_sweeps):
        if off_norm() <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = sn
                rot[q, p] = -sn
                m = rot.T @ m @ rot
                m[p, q] = m[q, p] = 0.0
    else:
        if off_norm() > thresh:
            raise ArithmeticError("Jacobi iteration did not converge")
    return np.sort(np.diag(m))[::-1].copy()


def classify_definiteness(eigenvalues: Sequence[float], zero_tol: float = DEFINITENESS_ZERO_TOL) -> str:
    ev = np.asarray(eigenvalues, dtype=float).reshape(-1)
    if ev.size == 0:
        raise ValueError("need at least one eigenvalue")
    if not np.all(np.isfinite(ev)):
        raise ValueError("eigenvalues must be finite")
    pos = bool(np.any(ev > zero_tol))
    neg = bool(np.any(ev < -zero_tol))
    zero = bool(np.any(np.abs(ev) <= zero_tol))
    if pos and neg:
        return "indefinite"
    if pos:
        return "positive-semidefinite" if zero else "positive-definite"
    if neg:
        return "negative-semidefinite" if zero else "negative-definite"
    # all eigenvalues numerically zero
    return "positive-semidefinite"


def spectral_report(a) -> SpectralReport:
    sym = symmetrize(a)
    ev = symmetric_eigenvalues(sym)
    ev.setflags(write=False)
    return SpectralReport(sym, ev, classify_definiteness(ev))


# Striker (row) vs goalkeeper (column); strategies are left, center, right.
PENALTY_SHOOTOUT = PayoffMatrix(
    [[0.0, 0.8, 0.7],
     [0.9, 0.0, 0.2],
     [0.75, 0.45, 0.0]],
    probabilistic=True,
)
# Published 3-decimal equilibrium and value for PENALTY_SHOOTOUT.
PENALTY_SHOOTOUT_REPORTED = {
    "x": (0.503, 0.422, 0.075),
    "y": (0.416, 0.276, 0.308),
    "value": 0.436,
}
BUILTIN_GAMES = {"penalty-shootout": PENALTY_SHOOTOUT}


def parse_matrix(text: str) -> PayoffMatrix:
    """Parse ``n`` on the first line followed by ``n`` rows of ``n`` numbers."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    rows = [ln.split() for ln in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionError(f"expected {n} rows of {n} values")
    return PayoffMatrix([[float(v) for v in r] for r in rows])


def format_matrix(a) -> str:
    a = _as_matrix(a)
    out = [str(a.n)]
    out += [" ".join(repr(float(v)) for v in row) for row in a.entries]
    return "\n".join(out) + "\n"


def load_matrix(path) -> PayoffMatrix:
    return parse_matrix(Path(path).read_text())


def resolve_game(source: str) -> ZeroSumGame:
    """Built-in game name or path to a matrix file."""
    if source in BUILTIN_GAMES:
        return build_zero_sum(BUILTIN_GAMES[source])
    return build_zero_sum(load_matrix(source))
