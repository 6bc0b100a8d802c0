"""Command-line front end.

    logitdyn nash
    logitdyn simulate --q 1 --eta 0.007
    logitdyn steady --q 1.2 --eta 1e-4
    logitdyn asymptotic --q 1.2
    logitdyn sweep --qs 1 --etas 0.1,0.01,0.007
    logitdyn verify --trials 1000 --seed 42

Defaults reproduce the case study: 200 cells, dt = 0.1,
(alpha, beta, gamma) = (1, 1, 1), uniform initial density.  A JSON config
file (``--config``) holds a flat object whose keys are flag names without
the leading dashes; explicit flags override it.

Exit codes: 0 success, 1 solver non-convergence or failed check, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from .diagnostics import NASH_HALFWIDTH, summarize
from .dynamics import SolverConfig, asymptotic_limit, l1_gap, moment_density, simulate, steady_fixed_point
from .equilibrium import NashResult, solve_pure_nash
from .grid import ActionGrid, Density, make_grid, point_mass_density, uniform_density
from .logit import LogitSettings, is_classical, verify_maximizer
from .output import write_density_csv, write_json, write_table_csv, write_trajectory_csv
from .payoff import PayoffParams, exp_moment, expected_payoff

SUMMARY_FIELDS = [
    "alpha", "beta", "gamma", "q", "eta", "n_cells", "dt", "steps_taken", "converged",
    "l1_residual", "nash_x", "mode_x", "mean", "variance", "mass_near_nash",
    "wasserstein_to_nash", "entropy",
]

EXIT_OK, EXIT_NONCONVERGED, EXIT_INVALID = 0, 1, 2


# ---------------------------------------------------------------- validation

def _number(kind, cond, what):
    def parse(text):
        try:
            value = kind(text)
        except (TypeError, ValueError):
            raise argparse.ArgumentTypeError(f"expected {what}, got {text!r}")
        if isinstance(value, float) and not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"expected {what}, got {text!r}")
        if not cond(value):
            raise argparse.ArgumentTypeError(f"expected {what}, got {text!r}")
        return value

    return parse


positive = _number(float, lambda v: v > 0, "a positive number")
q_value = _number(float, lambda v: v >= 1 or is_classical(v), "a number >= 1")
unit_step = _number(float, lambda v: 0 < v <= 1, "a number in (0, 1]")
cell_count = _number(int, lambda v: v >= 2, "an integer >= 2")
positive_int = _number(int, lambda v: v >= 1, "a positive integer")
integer = _number(int, lambda v: True, "an integer")


def _list_of(item):
    def parse(text):
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        return [item(p) for p in parts]

    return parse


def init_spec(text):
    if text == "uniform":
        return text
    if text.startswith("peak:"):
        x = _number(float, lambda v: 0 <= v <= 1, "peak:<x> with x in [0, 1]")(text[5:])
        return f"peak:{x!r}"
    raise argparse.ArgumentTypeError(f"expected 'uniform' or 'peak:<x>', got {text!r}")


# ---------------------------------------------------------------- parser

def _add_payoff(p):
    p.add_argument("--alpha", type=positive, default=1.0)
    p.add_argument("--beta", type=positive, default=1.0)
    p.add_argument("--gamma", type=positive, default=1.0)


def _add_common(p, *, eta=True, q=True):
    _add_payoff(p)
    p.add_argument("--cells", type=cell_count, default=200)
    if eta:
        p.add_argument("--eta", type=positive, default=0.01)
    if q:
        p.add_argument("--q", type=q_value, default=1.0)
    p.add_argument("--out", default="results", help="output directory")


def _add_solver(p):
    p.add_argument("--dt", type=unit_step, default=0.1)
    p.add_argument("--tol", type=positive, default=1e-10)
    p.add_argument("--max-steps", type=positive_int, default=1_000_000)
    p.add_argument("--damping", type=unit_step, default=1.0)
    p.add_argument("--init", type=init_spec, default="uniform")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logitdyn", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("nash", help="solve the pure Nash first-order condition")
    _add_payoff(p)
    p.add_argument("--tol", type=positive, default=1e-10)
    p.add_argument("--out", default="results")

    p = sub.add_parser("simulate", help="forward-Euler integration to stationarity")
    _add_common(p)
    _add_solver(p)
    p.add_argument("--snapshot-every", type=positive_int, default=None)

    p = sub.add_parser("steady", help="damped fixed-point iteration of the steady equation")
    _add_common(p)
    _add_solver(p)

    p = sub.add_parser("asymptotic", help="eta-free small-eta limit for q > 1")
    _add_common(p, eta=False)
    p.add_argument("--tol", type=positive, default=1e-10)
    p.add_argument("--max-steps", type=positive_int, default=1_000_000)
    p.add_argument("--damping", type=unit_step, default=1.0)

    p = sub.add_parser("sweep", help="cross product of eta and q values")
    _add_common(p, eta=False, q=False)
    _add_solver(p)
    p.add_argument("--etas", type=_list_of(positive), default=[0.1, 0.01, 0.007])
    p.add_argument("--qs", type=_list_of(q_value), default=[1.0])
    p.add_argument("--solver", choices=["simulate", "steady"], default="simulate")
    p.add_argument("--jobs", type=positive_int, default=1)

    p = sub.add_parser("verify", help="check the logit map against random perturbations")
    _add_common(p)
    p.add_argument("--init", type=init_spec, default="uniform")
    p.add_argument("--trials", type=positive_int, default=1000)
    p.add_argument("--seed", type=integer, default=42)

    for p in sub.choices.values():
        p.add_argument("--config", default=None, help="JSON file of flag defaults")
    parser.commands = dict(sub.choices)
    return parser


@dataclass
class RunSpec:
    subcommand: str
    params: PayoffParams
    settings: Optional[LogitSettings]
    n_cells: int = 200
    dt: float = 0.1
    tol: float = 1e-10
    max_steps: int = 1_000_000
    damping: float = 1.0
    init: str = "uniform"
    etas: List[float] = field(default_factory=list)
    qs: List[float] = field(default_factory=list)
    solver: str = "simulate"
    jobs: int = 1
    snapshot_every: Optional[int] = None
    trials: int = 1000
    seed: int = 42
    out: Path = Path("results")

    def solver_config(self, settings: Optional[LogitSettings] = None) -> SolverConfig:
        return SolverConfig(
            settings=settings or self.settings or LogitSettings(),
            params=self.params,
            dt=self.dt,
            max_steps=self.max_steps,
            tol=self.tol,
            damping=self.damping,
        )


def _config_tokens(path: str, subparser: argparse.ArgumentParser) -> List[str]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        subparser.error(f"config: cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        subparser.error(f"config: {path} is not valid JSON ({exc.msg})")
    if not isinstance(data, dict):
        subparser.error(f"config: {path} must hold a flat JSON object")
    known = {s for a in subparser._actions for s in a.option_strings}
    tokens = []
    for key, value in data.items():
        flag = f"--{key}"
        if key == "config" or flag not in known:
            subparser.error(f"config: unknown key {key!r} for '{subparser.prog}'")
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, (dict, bool)) or value is None:
            subparser.error(f"config: key {key!r} must be a number, string, or list")
        tokens += [flag, str(value)]
    return tokens


def parse_and_validate(argv: Optional[Sequence[str]] = None) -> RunSpec:
    """Parse argv into a RunSpec; invalid input exits with status 2."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    ns = parser.parse_args(argv)
    subparser = parser.commands[ns.subcommand]
    if ns.config:
        # config values go first so that explicit flags parsed later win
        tokens = _config_tokens(ns.config, subparser)
        ns = parser.parse_args([ns.subcommand] + tokens + argv[1:])

    params = PayoffParams(ns.alpha, ns.beta, ns.gamma)
    settings = None
    if hasattr(ns, "eta") or hasattr(ns, "q"):
        settings = LogitSettings(getattr(ns, "eta", 0.01), getattr(ns, "q", 1.0))
    if ns.subcommand == "asymptotic" and settings.classical:
        subparser.error("argument --q: asymptotic limit needs q > 1")

    spec = RunSpec(subcommand=ns.subcommand, params=params, settings=settings, out=Path(ns.out))
    for name in ("dt", "tol", "max_steps", "damping", "init", "etas", "qs", "solver",
                 "jobs", "snapshot_every", "trials", "seed"):
        if hasattr(ns, name):
            setattr(spec, name, getattr(ns, name))
    if hasattr(ns, "cells"):
        spec.n_cells = ns.cells
    return spec


# ---------------------------------------------------------------- running

def initial_density(init: str, grid: ActionGrid) -> Density:
    if init == "uniform":
        return uniform_density(grid)
    return point_mass_density(grid, float(init.split(":", 1)[1]))


def summary_row(spec: RunSpec, settings, d: Density, nash: NashResult, steps, converged,
                residual=None) -> dict:
    record = summarize(d, spec.params, settings or LogitSettings(), nash, NASH_HALFWIDTH)
    row = {
        "alpha": spec.params.alpha,
        "beta": spec.params.beta,
        "gamma": spec.params.gamma,
        "q": settings.q if settings else None,
        "eta": settings.eta if settings else None,
        "n_cells": d.grid.n_cells,
        "dt": spec.dt,
        "steps_taken": steps,
        "converged": converged,
        "nash_x": nash.x_hat,
    }
    row.update(record.as_dict())
    if residual is not None:
        row["l1_residual"] = residual
    return row


def _run_density_job(spec: RunSpec, settings: LogitSettings, solver: str, path: Path) -> dict:
    grid = make_grid(spec.n_cells)
    config = spec.solver_config(settings)
    init = initial_density(spec.init, grid)
    if solver == "steady":
        result = steady_fixed_point(init, config)
    else:
        result = simulate(init, config, snapshot_every=spec.snapshot_every)
    write_density_csv(path, result.final)
    if result.trajectory_samples:
        write_trajectory_csv(path.with_name(path.stem + "_trajectory.csv"), result.trajectory_samples)
    nash = solve_pure_nash(spec.params, check_unique=False)
    row = summary_row(spec, settings, result.final, nash, result.steps_taken, result.converged)
    row["solver"] = solver
    return row


def _sweep_job(args):
    spec, q, eta, path = args
    try:
        return _run_density_job(spec, LogitSettings(eta, q), spec.solver, path)
    except (ValueError, ArithmeticError) as exc:
        return {"q": q, "eta": eta, "converged": False, "error": str(exc)}


def _job_filename(q: float, eta: float) -> str:
    return f"density_q{q!r}_eta{eta!r}.csv"


def run(spec: RunSpec) -> int:
    out = spec.out
    out.mkdir(parents=True, exist_ok=True)

    if spec.subcommand == "nash":
        nash = solve_pure_nash(spec.params, spec.tol)
        record = {"alpha": spec.params.alpha, "beta": spec.params.beta, "gamma": spec.params.gamma,
                  "nash_x": nash.x_hat, "residual": nash.residual, "iterations": nash.iterations,
                  "sign_changes": nash.sign_changes}
        write_json(out / "nash.json", record)
        print(f"x_hat = {nash.x_hat!r}")
        return EXIT_OK

    if spec.subcommand in ("simulate", "steady"):
        row = _run_density_job(spec, spec.settings, spec.subcommand, out / "density.csv")
        write_json(out / "summary.json", row)
        _print_row(row)
        return EXIT_OK if row["converged"] else EXIT_NONCONVERGED

    if spec.subcommand == "asymptotic":
        grid = make_grid(spec.n_cells)
        result = asymptotic_limit(spec.solver_config(), grid)
        write_density_csv(out / "density.csv", result.final)
        # residual of the eta-free self-consistency map itself
        refreshed = moment_density(grid, spec.params, spec.settings.q,
                                   exp_moment(result.final, spec.params.beta))
        nash = solve_pure_nash(spec.params, check_unique=False)
        row = summary_row(spec, spec.settings, result.final, nash, result.steps_taken,
                          result.converged, residual=l1_gap(refreshed, result.final))
        row.update(eta=None, dt=None, exp_moment=result.exp_moment)
        write_json(out / "summary.json", row)
        _print_row(row)
        return EXIT_OK if result.converged else EXIT_NONCONVERGED

    if spec.subcommand == "sweep":
        jobs = [(spec, q, eta, out / _job_filename(q, eta)) for q in spec.qs for eta in spec.etas]
        if spec.jobs > 1:
            with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
                rows = list(pool.map(_sweep_job, jobs))
        else:
            rows = [_sweep_job(j) for j in jobs]
        for row in rows:
            row.setdefault("error", "")
            row["file"] = _job_filename(row["q"], row["eta"])
        write_table_csv(out / "sweep_summary.csv", rows, SUMMARY_FIELDS + ["solver", "file", "error"])
        for row in rows:
            status = "ok" if row["converged"] else f"FAILED {row['error']}".strip()
            print(f"q={row['q']!r} eta={row['eta']!r}: {status}")
        return EXIT_OK if all(r["converged"] for r in rows) else EXIT_NONCONVERGED

    if spec.subcommand == "verify":
        grid = make_grid(spec.n_cells)
        profile = expected_payoff(initial_density(spec.init, grid), spec.params)
        report = verify_maximizer(profile, spec.settings, spec.trials, spec.seed)
        record = {"q": spec.settings.q, "eta": spec.settings.eta, "n_cells": spec.n_cells,
                  "init": spec.init, **report.__dict__}
        write_json(out / "verify.json", record)
        verdict = "pass" if report.passed else "FAIL"
        print(f"{verdict}: {report.trials} trials, worst margin {report.worst_margin!r}")
        return EXIT_OK if report.passed else EXIT_NONCONVERGED

    raise AssertionError(spec.subcommand)


def _print_row(row: dict) -> None:
    for key in SUMMARY_FIELDS:
        print(f"{key} = {row.get(key)!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    spec = parse_and_validate(argv)
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
