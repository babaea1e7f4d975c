"""Command-line entry point: ``replicator-fl {solve,spectrum,run,list}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .dynamics import DEFAULT_GAIN
from .equilibrium import solve_interior_nash, verify_nash
from .game import resolve_game, spectral_report
from .scenarios import (
    BUILTIN_SCENARIOS,
    get_scenario,
    run_scenarios,
    with_overrides,
)


def _parse_gains(text: str):
    """``0.5`` (uniform) or ``k1,k2,k3:c1,c2,c3``."""
    if ":" in text:
        k, c = text.split(":", 1)
        return {"k": [float(v) for v in k.split(",")], "c": [float(v) for v in c.split(",")]}
    return float(text)


def _fmt(values) -> str:
    return "[" + ", ".join(f"{v:.6f}" for v in values) + "]"


def cmd_solve(args) -> int:
    game = resolve_game(args.game)
    ne = solve_interior_nash(game)
    report = verify_nash(game, ne, tol=args.tol)
    print(f"x* = {_fmt(ne.x_star.probs)}")
    print(f"y* = {_fmt(ne.y_star.probs)}")
    print(f"value = {ne.value:.6f}")
    print()
    print(f"{'side':<5}{'i':>3}{'pure payoff':>16}{'mixed payoff':>16}{'delta':>14}")
    for side, pure, mixed, delta in (
        ("row", report.row_payoffs, report.row_mixed, report.row_deltas),
        ("col", report.col_payoffs, report.col_mixed, report.col_deltas),
    ):
        for i, (p, d) in enumerate(zip(pure, delta), start=1):
            print(f"{side:<5}{i:>3}{p:>16.6f}{mixed:>16.6f}{d:>14.2e}")
    verdict = "certified" if report.certified else "NOT certified"
    print(f"\nmax |delta| = {report.max_abs_delta:.3e} ({verdict} at tol {args.tol:g})")
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    return 0 if report.certified else 1


def cmd_spectrum(args) -> int:
    game = resolve_game(args.game)
    rep = spectral_report(game.a)
    print("symmetric part:")
    for row in rep.symmetrized.entries:
        print("  " + "  ".join(f"{v:9.4f}" for v in row))
    print(f"eigenvalues = {_fmt(rep.eigenvalues)}")
    print(f"definiteness = {rep.definiteness}")
    return 0


def cmd_list(args) -> int:
    for name, sc in BUILTIN_SCENARIOS.items():
        gains = "-" if sc.gains is None else sc.gains
        print(f"{name:<7} {sc.mode:<13} sigma={sc.sigma:<5g} seed={sc.seed:<3} gains={gains!s:<4} "
              f"t_final={sc.horizon:g}  {sc.description}")
    return 0


def cmd_run(args) -> int:
    names = list(BUILTIN_SCENARIOS) if args.scenario == ["all"] else args.scenario
    scenarios = []
    for name in names:
        sc = get_scenario(name)
        gains = _parse_gains(args.gains) if args.gains else None
        if args.mode == "controlled" and sc.gains is None and gains is None:
            gains = DEFAULT_GAIN
        sc = with_overrides(sc, seed=args.seed, sigma=args.sigma, gains=gains, dt=args.dt,
                            t_final=args.t_final, mode=args.mode, csv_stride=args.stride)
        scenarios.append(sc)
    for m in run_scenarios(scenarios, args.out_dir, jobs=args.jobs):
        print(f"{m.scenario}:")
        for path, digest in m.outputs.items():
            print(f"  {digest[:16]}  {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="replicator-fl", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="interior Nash equilibrium and indifference table")
    s.add_argument("--game", default="penalty-shootout", help="built-in game name or matrix file")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--csv", help="also write the indifference table as CSV")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("spectrum", help="eigenvalues and definiteness of the symmetric payoff part")
    s.add_argument("--game", default="penalty-shootout")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("list", help="list built-in scenarios")
    s.set_defaults(func=cmd_list)

    s = sub.add_parser("run", help="run scenarios (built-in names, .json files, or 'all')")
    s.add_argument("scenario", nargs="+")
    s.add_argument("--seed", type=int)
    s.add_argument("--sigma", type=float)
    s.add_argument("--gains", help="uniform gain, or k1,..,kn:c1,..,cn")
    s.add_argument("--dt", type=float)
    s.add_argument("--t-final", type=float, dest="t_final")
    s.add_argument("--mode", choices=["uncontrolled", "controlled"])
    s.add_argument("--stride", type=int, help="write every N-th sample to CSV")
    s.add_argument("--out-dir", default="out", dest="out_dir")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
