"""CSV and SVG output for trajectories."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .dynamics import Trajectory

PLOT_KINDS = ("strategies", "payoff-differences", "lyapunov")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def csv_header(n: int, annotated: bool) -> list[str]:
    cols = ["t"] + [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    if annotated:
        cols += ["V_kl", "V_quad", "Vdot_unc", "Vdot_ctl"]
        cols += [f"pdx{i}" for i in range(1, n + 1)] + [f"pdy{i}" for i in range(1, n + 1)]
    return cols


def _columns(trajectory: Trajectory) -> np.ndarray:
    parts = [trajectory.t[:, None], trajectory.x, trajectory.y]
    m = trajectory.monitors
    if m is not None:
        parts += [m.v_kl[:, None], m.v_quad[:, None], m.vdot_unc[:, None], m.vdot_ctl[:, None],
                  m.pd_row, m.pd_col]
    return np.hstack(parts)


def csv_text(trajectory: Trajectory, stride: int = 1) -> str:
    """17 significant digits, LF line endings; every ``stride``-th sample plus the last."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    data = _columns(trajectory)
    idx = list(range(0, len(trajectory), stride))
    if idx[-1] != len(trajectory) - 1:
        idx.append(len(trajectory) - 1)
    lines = [",".join(csv_header(trajectory.n, trajectory.monitors is not None))]
    for i in idx:
        lines.append(",".join(format(v, ".17g") for v in data[i].tolist()))
    return "\n".join(lines) + "\n"


def emit_csv(trajectory: Trajectory, path, stride: int = 1) -> str:
    """Write the trajectory table and return its SHA-256 digest."""
    payload = csv_text(trajectory, stride).encode("ascii")
    Path(path).write_bytes(payload)
    return hashlib.sha256(payload).hexdigest()


def _plot_series(trajectory: Trajectory, kind: str):
    n = trajectory.n
    if kind == "strategies":
        series = [(f"x{i + 1}", trajectory.x[:, i]) for i in range(n)]
        series += [(f"y{i + 1}", trajectory.y[:, i]) for i in range(n)]
        return series, "probability"
    m = trajectory.monitors
    if m is None:
        raise ValueError(f"{kind!r} plot needs an annotated trajectory")
    if kind == "payoff-differences":
        series = [(f"pdx{i + 1}", m.pd_row[:, i]) for i in range(n)]
        series += [(f"pdy{i + 1}", m.pd_col[:, i]) for i in range(n)]
        return series, "payoff difference"
    if kind == "lyapunov":
        return [("V_kl", m.v_kl), ("V_quad", m.v_quad)], "Lyapunov value"
    raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")


def emit_plot(trajectory: Trajectory, kind: str, path, max_points: int = 2000, title: str | None = None) -> str:
    """Render one line chart as a self-contained SVG and return its digest."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series, ylabel = _plot_series(trajectory, kind)
    idx = np.unique(np.linspace(0, len(trajectory) - 1, min(max_points, len(trajectory))).round().astype(int))
    t = trajectory.t[idx]
    with matplotlib.rc_context({"svg.hashsalt": "replicator-fl", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(8, 4.5))
        for label, values in series:
            ax.plot(t, values[idx], label=label, linewidth=1.2, gid=f"series-{label}")
        if kind == "payoff-differences":
            ax.axhline(0.0, color="0.6", linewidth=0.8)
        if kind == "lyapunov" and all(np.all(v[idx] > 0.0) for _, v in series):
            ax.set_yscale("log")
        ax.set_xlabel("t")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(loc="best", fontsize="small", ncol=2)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return file_digest(path)
