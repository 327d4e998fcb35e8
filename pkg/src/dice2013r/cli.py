"""
Command-line entry point.

    dice2013r <command> --config scenario.ini [--output PATH] [--verbose]

Commands: simulate, optimize, scc, aux, check-grad, verify, plot-data.

Exit codes: 0 success, 1 usage/config error, 2 infeasible simulation,
3 verification failure, 4 optimizer non-convergence (results still
written).
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import csvio
from .config import ConfigError, parse_config
from .dynamics import InfeasibleEvaluation
from .exogenous import build_exogenous
from .optimizer import optimize
from .params import bound_schedule
from .sensitivity import fd_control_gradient, marginals, welfare_gradient
from .trajectory import ControlPath, auxiliary, default_controls, simulate
from .verify import compare_tables

COMMANDS = ("simulate", "optimize", "scc", "aux", "check-grad", "verify", "plot-data")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY = 3
EXIT_NOT_CONVERGED = 4


class UsageError(Exception):
    pass


def _controls(cfg, params):
    if cfg.controls_source == "inline":
        return ControlPath(cfg.mu, cfg.s)
    if cfg.controls_source == "csv":
        try:
            return csvio.read_controls(cfg.controls_path, params.n_periods)
        except (OSError, ValueError) as err:
            raise UsageError(f"controls: {err}") from None
    return default_controls(params)


def _full_table(cfg, params, exo, controls, traj, with_scc=False, with_aux=False):
    cols = csvio.trajectory_columns(traj, controls, params)
    if with_scc:
        cols.update(csvio.scc_columns(marginals(cfg.initial, controls, exo, params, traj=traj)))
    if with_aux:
        cols.update(csvio.aux_columns(auxiliary(traj, controls, exo, params), exo))
    return cols


def _cmd_simulate(cfg, params, exo, out, with_scc=False, with_aux=False):
    controls = _controls(cfg, params)
    traj = simulate(cfg.initial, controls, exo, params)
    path = csvio.write_csv(out, _full_table(cfg, params, exo, controls, traj, with_scc, with_aux))
    print(f"welfare {traj.welfare!r}")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_optimize(cfg, params, exo, out):
    start = _controls(cfg, params) if cfg.controls_source != "defaults" else None
    res = optimize(cfg.initial, start, bound_schedule(params), exo, params, cfg.optimizer)
    path = csvio.write_csv(out, csvio.trajectory_columns(res.trajectory, res.controls, params))
    summary = {
        "J": res.welfare,
        "status": res.status,
        "iterations": res.iterations,
        "projected_gradient_norm": res.projected_gradient_norm,
        "evaluations": res.evaluations,
    }
    summary_path = Path(out).with_suffix(".summary.json")
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    print(f"J {res.welfare!r}")
    print(f"status {res.status}")
    print(f"iterations {res.iterations}")
    print(f"projected_gradient_norm {res.projected_gradient_norm:.3e}")
    print(f"wrote {path} and {summary_path}")
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def _cmd_check_grad(cfg, params, exo):
    controls = _controls(cfg, params)
    _, gm, gs = welfare_gradient(cfg.initial, controls, exo, params)
    fm, fs = fd_control_gradient(cfg.initial, controls, exo, params, step=cfg.grad_step)
    adj = np.concatenate([gm, gs])
    fd = np.concatenate([fm, fs])
    mask = np.abs(adj) > cfg.grad_floor
    rel = np.abs(adj - fd)[mask] / np.abs(adj[mask])
    max_rel = float(rel.max()) if rel.size else 0.0
    worst = int(np.flatnonzero(mask)[np.argmax(rel)]) if rel.size else -1
    n = params.n_periods
    label = "n/a" if worst < 0 else (f"mu({worst + 1})" if worst < n else f"s({worst - n + 1})")
    print(f"max relative error {max_rel:.3e} over {int(mask.sum())} coordinates with |grad| > {cfg.grad_floor:g}"
          f" (worst {label})")
    print(f"max absolute error {float(np.max(np.abs(adj - fd))):.3e}")
    return EXIT_OK


def _cmd_verify(cfg, produced_path, reference_path):
    if reference_path is None:
        raise UsageError("verify: no reference CSV (set verify.reference or pass --reference)")
    try:
        produced = csvio.read_csv(produced_path)
        reference = csvio.read_csv(reference_path)
    except (OSError, ValueError) as err:
        raise UsageError(f"verify: {err}") from None
    try:
        reports = compare_tables(
            produced, reference,
            column_map=cfg.column_map if cfg else None,
            rtol=cfg.rtol if cfg else 1e-4,
            atol=cfg.atol if cfg else 0.0,
            column_rtol=cfg.column_rtol if cfg else None,
            column_atol=cfg.column_atol if cfg else None,
        )
    except ValueError as err:
        print(f"verify: {err}", file=sys.stderr)
        return EXIT_VERIFY
    ok = True
    for rep in reports:
        print(rep.describe())
        ok &= rep.passed

    if cfg is not None and cfg.reference_welfare is not None:
        params = cfg.params()
        controls = ControlPath(produced["mu"], produced["s"])
        w = simulate(cfg.initial, controls, build_exogenous(params), params).welfare
        passed = w >= cfg.reference_welfare - cfg.welfare_atol
        print(f"{'ok  ' if passed else 'FAIL'} welfare {w!r} vs reference {cfg.reference_welfare!r}")
        ok &= passed
    failed = [r.column for r in reports if not r.passed]
    if failed:
        print(f"verification failed in column(s): {', '.join(failed)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_plot_data(cfg, params, exo, out_dir):
    controls = _controls(cfg, params)
    traj = simulate(cfg.initial, controls, exo, params)
    cols = _full_table(cfg, params, exo, controls, traj, with_scc=True, with_aux=True)
    files = csvio.write_series(out_dir, params.years, cols)
    print(f"wrote {len(files)} series to {out_dir}")
    return EXIT_OK


def run_command(command, config, output=None, reference=None, produced=None, verbose=False):
    """
    Run one command against a parsed ScenarioConfig and return the exit
    code. ``config`` may be None only for ``verify``.
    """
    if command not in COMMANDS:
        print(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_USAGE
    cfg = config
    try:
        if command == "verify":
            produced = produced or output or (cfg.produced_path or cfg.output_path if cfg else None)
            reference = reference or (cfg.reference_path if cfg else None)
            if produced is None:
                raise UsageError("verify: no produced CSV (set verify.produced or pass --produced)")
            return _cmd_verify(cfg, produced, reference)

        if cfg is None:
            raise UsageError(f"{command}: --config is required")
        if verbose:
            cfg = replace(cfg, optimizer=replace(cfg.optimizer, verbose=True))
        params = cfg.params()
        exo = build_exogenous(params)
        if command == "simulate":
            return _cmd_simulate(cfg, params, exo, output or cfg.output_path)
        if command == "scc":
            return _cmd_simulate(cfg, params, exo, output or cfg.output_path, with_scc=True)
        if command == "aux":
            return _cmd_simulate(cfg, params, exo, output or cfg.output_path, with_aux=True)
        if command == "optimize":
            return _cmd_optimize(cfg, params, exo, output or cfg.output_path)
        if command == "check-grad":
            return _cmd_check_grad(cfg, params, exo)
        return _cmd_plot_data(cfg, params, exo, output or cfg.plot_dir)
    except InfeasibleEvaluation as err:
        print(f"infeasible simulation: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, ConfigError) as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="dice2013r", description="DICE2013R simulation, optimization and social cost of carbon.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="scenario config file (INI)")
    p.add_argument("--output", type=Path, help="output CSV path (directory for plot-data)")
    p.add_argument("--reference", type=Path, help="reference CSV for verify")
    p.add_argument("--produced", type=Path, help="produced CSV for verify")
    p.add_argument("--verbose", action="store_true", help="optimizer progress on stderr")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cfg = None
    if args.config is not None:
        try:
            cfg = parse_config(args.config)
        except ConfigError as err:
            print(str(err), file=sys.stderr)
            return EXIT_USAGE
    return run_command(args.command, cfg, args.output, args.reference, args.produced, args.verbose)


if __name__ == "__main__":
    sys.exit(main())
