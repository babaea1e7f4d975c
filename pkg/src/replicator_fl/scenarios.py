"""Declarative experiment scenarios and the runner that executes them.

A scenario file is a JSON object with the fields of :class:`Scenario`::

    {
      "name": "my-run",
      "game": "penalty-shootout",        # or a path to a matrix file
      "mode": "controlled",              # or "uncontrolled"
      "sigma": 0.02, "seed": 7,
      "gains": 0.5,                      # or {"k": [...], "c": [...]}
      "dt": 0.001, "t_final": 40,
      "initial": {"x": [...], "y": [...]},   # optional, overrides sigma/seed
      "outputs": ["csv", "svg"],
      "plots": ["strategies", "lyapunov"],
      "csv_stride": 100
    }

Only ``name`` and ``mode`` are required.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Union

from .dynamics import (
    DEFAULT_DT,
    DEFAULT_EPSILON,
    DEFAULT_T_FINAL,
    ControllerGains,
    JointState,
    SimConfig,
    Trajectory,
    perturb_equilibrium,
    simulate,
)
from .equilibrium import NashPoint, solve_interior_nash
from .export import PLOT_KINDS, emit_csv, emit_plot, file_digest
from .game import ZeroSumGame, resolve_game
from .lyapunov import annotate_trajectory

OUTPUT_KINDS = ("csv", "svg")
GainSpec = Union[None, float, dict]


class ScenarioError(RuntimeError):
    def __init__(self, name, cause):
        super().__init__(f"scenario {name!r}: {cause}")
        self.name = name


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    game: str = "penalty-shootout"
    sigma: float = 0.0
    seed: int = 0
    gains: GainSpec = None
    dt: float = DEFAULT_DT
    t_final: Optional[float] = None
    initial: Optional[dict] = None
    outputs: tuple = ("csv", "svg")
    plots: tuple = ("strategies",)
    csv_stride: int = 100
    simplex_epsilon: float = DEFAULT_EPSILON
    description: str = ""

    def __post_init__(self):
        if not self.name or any(c in self.name for c in "/\\"):
            raise ValueError(f"invalid scenario name {self.name!r}")
        if self.mode not in DEFAULT_T_FINAL:
            raise ValueError(f"mode must be 'uncontrolled' or 'controlled', got {self.mode!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.mode == "controlled" and self.gains is None:
            raise ValueError(f"controlled scenario {self.name!r} needs gains")
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "plots", tuple(self.plots))
        for o in self.outputs:
            if o not in OUTPUT_KINDS:
                raise ValueError(f"unknown output {o!r}")
        for p in self.plots:
            if p not in PLOT_KINDS:
                raise ValueError(f"unknown plot kind {p!r}")
        if self.initial is not None and not {"x", "y"} <= set(self.initial):
            raise ValueError("initial must provide both 'x' and 'y'")

    @property
    def horizon(self) -> float:
        return DEFAULT_T_FINAL[self.mode] if self.t_final is None else float(self.t_final)

    def resolve_gains(self, n: int) -> Optional[ControllerGains]:
        g = self.gains
        if g is None:
            return None
        if isinstance(g, (int, float)):
            return ControllerGains.uniform(n, float(g))
        if isinstance(g, dict):
            k, c = g["k"], g["c"]
            k = [float(k)] * n if isinstance(k, (int, float)) else k
            c = [float(c)] * n if isinstance(c, (int, float)) else c
            return ControllerGains(k, c)
        raise ValueError(f"cannot interpret gains {g!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["outputs"] = list(self.outputs)
        d["plots"] = list(self.plots)
        d["t_final"] = self.horizon
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**data)


def load_scenario(path) -> Scenario:
    return Scenario.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class RunManifest:
    scenario: str
    config: dict
    equilibrium: dict
    outputs: dict = field(default_factory=dict)  # path -> sha256

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


# Initial distribution of the hand-picked off-equilibrium run.
FIG2_INITIAL = {"x": [0.51, 0.42, 0.07], "y": [0.42, 0.27, 0.31]}
# (a)/(b) panels are two noise draws. Seeds 2 and 3 at sigma=0.2 put a
# component below zero (clipped to the boundary), so the (b) draw uses seed 4.
_SEEDS = {0.02: (1, 2), 0.2: (1, 4)}


def _builtin() -> dict[str, Scenario]:
    out = {}

    def add(name, desc, **kw):
        out[name] = Scenario(name=name, description=desc, **kw)

    add("fig1", "start exactly at the equilibrium, uncontrolled", mode="uncontrolled")
    add("fig2", "uncontrolled from x=[0.51,0.42,0.07], y=[0.42,0.27,0.31]",
        mode="uncontrolled", initial=FIG2_INITIAL)
    for sigma, fig in ((0.02, 3), (0.2, 4)):
        for panel, seed in zip("ab", _SEEDS[sigma]):
            add(f"fig{fig}{panel}", f"uncontrolled, Gaussian start sigma={sigma}",
                mode="uncontrolled", sigma=sigma, seed=seed, plots=("strategies", "lyapunov"))
    add("fig5", "payoff differences of fig3a", mode="uncontrolled", sigma=0.02, seed=_SEEDS[0.02][0],
        plots=("payoff-differences",))
    add("fig6", "payoff differences of fig4a", mode="uncontrolled", sigma=0.2, seed=_SEEDS[0.2][0],
        plots=("payoff-differences",))
    for sigma, fig in ((0.02, 7), (0.2, 8)):
        for panel, seed in zip("ab", _SEEDS[sigma]):
            add(f"fig{fig}{panel}", f"feedback-linearized, sigma={sigma}, k=c=0.5",
                mode="controlled", sigma=sigma, seed=seed, gains=0.5, plots=("strategies", "lyapunov"))
    add("fig9", "payoff differences of fig7a", mode="controlled", sigma=0.02, seed=_SEEDS[0.02][0],
        gains=0.5, plots=("payoff-differences",))
    add("fig10", "payoff differences of fig8a", mode="controlled", sigma=0.2, seed=_SEEDS[0.2][0],
        gains=0.5, plots=("payoff-differences",))
    return out


BUILTIN_SCENARIOS = _builtin()


def list_builtin_scenarios() -> dict[str, Scenario]:
    return dict(BUILTIN_SCENARIOS)


def get_scenario(name_or_path: str) -> Scenario:
    if name_or_path in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[name_or_path]
    p = Path(name_or_path)
    if p.suffix == ".json" and p.exists():
        return load_scenario(p)
    raise KeyError(f"unknown scenario {name_or_path!r} (not built in and not a .json file)")


def prepare(scenario: Scenario) -> tuple[ZeroSumGame, NashPoint, SimConfig]:
    """Resolve the game, equilibrium and simulation config for a scenario."""
    game = resolve_game(scenario.game)
    target = solve_interior_nash(game)
    if scenario.initial is not None:
        initial = JointState.of(scenario.initial["x"], scenario.initial["y"])
    else:
        initial = perturb_equilibrium(target, scenario.sigma, scenario.seed, scenario.simplex_epsilon)
    config = SimConfig(
        mode=scenario.mode,
        target=target,
        initial=initial,
        dt=scenario.dt,
        t_final=scenario.horizon,
        gains=scenario.resolve_gains(game.n) if scenario.mode == "controlled" else None,
        simplex_epsilon=scenario.simplex_epsilon,
    )
    return game, target, config


def simulate_scenario(scenario: Scenario) -> tuple[ZeroSumGame, NashPoint, Trajectory]:
    game, target, config = prepare(scenario)
    traj = simulate(game, config)
    return game, target, annotate_trajectory(game, target, config.gains, traj)


def run_scenario(scenario: Scenario, out_dir=".") -> RunManifest:
    try:
        game, target, traj = simulate_scenario(scenario)
    except Exception as exc:
        raise ScenarioError(scenario.name, exc) from exc
    out = Path(out_dir)
    written = {}
    try:
        out.mkdir(parents=True, exist_ok=True)
        if "csv" in scenario.outputs:
            p = out / f"{scenario.name}.csv"
            written[str(p)] = emit_csv(traj, p, scenario.csv_stride)
        if "svg" in scenario.outputs:
            for kind in scenario.plots:
                p = out / f"{scenario.name}_{kind}.svg"
                written[str(p)] = emit_plot(traj, kind, p, title=f"{scenario.name}: {scenario.description}")
    except OSError as exc:
        raise ScenarioError(scenario.name, exc) from exc
    manifest = RunManifest(
        scenario=scenario.name,
        config=scenario.to_dict(),
        equilibrium={
            "x_star": target.x_star.probs.tolist(),
            "y_star": target.y_star.probs.tolist(),
            "value": target.value,
        },
        outputs=written,
    )
    try:
        (out / f"{scenario.name}_manifest.json").write_text(manifest.to_json())
    except OSError as exc:
        raise ScenarioError(scenario.name, exc) from exc
    return manifest


def _run_one(args):
    scenario, out_dir = args
    return run_scenario(scenario, out_dir)


def run_scenarios(scenarios, out_dir=".", jobs: int = 1) -> list[RunManifest]:
    """Run independent scenarios, optionally in worker processes."""
    scenarios = list(scenarios)
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ValueError("scenario names must be unique within a run")
    if jobs <= 1 or len(scenarios) <= 1:
        return [run_scenario(s, out_dir) for s in scenarios]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, [(s, out_dir) for s in scenarios]))


def verify_manifest(manifest: RunManifest) -> bool:
    return all(file_digest(p) == d for p, d in manifest.outputs.items())


def with_overrides(scenario: Scenario, **overrides) -> Scenario:
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(scenario, **changes) if changes else scenario
