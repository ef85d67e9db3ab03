#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Periodic event-triggered impulsive consensus for heterogeneous stochastic agents
#
# Copyright (C) 2025 The petic developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command-line front end.

    petic verify   <scenario> [--strict]
    petic run      <scenario> [--seed N] [--uncontrolled]
    petic ensemble <scenario> [--runs N] [--seed N] [--uncontrolled]
    petic baseline <scenario> [--seed N]

<scenario> is a YAML file or the name of a bundled scenario. Every subcommand accepts
--out DIR, --gnuplot, --strict and --log-level.

Exit codes: 0 success, 1 infeasible certificate, 2 invalid scenario (or a failed
matching check under --strict), 3 numerical blowup.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence

from .analysis import decay_check, trigger_report, verify_scenario
from .config import configure_logging
from .errors import (
    ConfigurationError,
    EnsembleFailureError,
    NumericalBlowupError,
    ScenarioParseError,
)
from .models import CertificateReport
from .scenario import Scenario, list_bundled_scenarios, load_scenario
from .simulator import reduce_runs, run_ensemble, run_trajectory
from .utils.export import (
    write_ensemble_csv,
    write_events_csv,
    write_gnuplot_scripts,
    write_positions_csv,
    write_report,
    write_trajectory_csv,
)
from .utils.rng import derive_run_seed

logger = logging.getLogger("petic.cli")

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID = 2
EXIT_BLOWUP = 3


def _print_certificate(report: CertificateReport) -> None:
    print(f"mode            {report.mode}")
    print(f"lambda          {report.lambda_:.6g}")
    if report.lambda1 is not None:
        print(f"lambda1         {report.lambda1:.6g}")
    if report.lambda1_tilde is not None:
        print(f"lambda1_tilde   {report.lambda1_tilde:.6g}")
    print(f"gamma_bar       {report.gamma_bar:.6g}")
    certified = "certified" if report.gamma_certified else "uncertified"
    print(f"gamma           {report.gamma:.6g} ({certified})")
    print(f"M               {report.M:.6g}")
    print(f"feasible        {'yes' if report.feasible else 'no'}")
    for check in report.assumptions:
        status = "ok" if check.passed else ("FAIL" if check.mandatory else "warn")
        residual = "" if check.residual is None else f" residual={check.residual:.3g}"
        print(f"  [{status:>4}] {check.name}{residual}")


def _verdict(report: CertificateReport) -> int:
    if all(c.passed for c in report.assumptions if c.mandatory):
        return EXIT_OK if report.feasible else EXIT_INFEASIBLE
    return EXIT_INVALID


def _matching_gate(scenario: Scenario, strict: bool) -> Optional[CertificateReport]:
    report = verify_scenario(scenario, strict=strict)
    if strict and _verdict(report) == EXIT_INVALID:
        for check in report.assumptions:
            if check.mandatory and not check.passed:
                print(f"error: {check.name} failed: {check.detail}", file=sys.stderr)
        return None
    return report


def cmd_verify(scenario: Scenario, args: argparse.Namespace) -> int:
    """Print the certificate, write report.json and map the verdict to an exit code."""
    report = verify_scenario(scenario, strict=args.strict)
    _print_certificate(report)
    write_report(
        {"scenario": scenario.name, "certificate": report.to_dict()},
        Path(args.out) / "report.json",
    )
    return _verdict(report)


def _mode(args: argparse.Namespace) -> Optional[str]:
    return "none" if getattr(args, "uncontrolled", False) else None


def cmd_run(scenario: Scenario, args: argparse.Namespace) -> int:
    """Simulate one sample path and write trajectory, events and positions."""
    report = _matching_gate(scenario, args.strict)
    if report is None:
        return EXIT_INVALID
    certificate = _warn_uncertified(scenario, report)
    seed = args.seed if args.seed is not None else derive_run_seed(scenario.sim.master_seed, 0)
    trajectory = run_trajectory(scenario, seed, mode=_mode(args))

    out = Path(args.out)
    written = [
        write_trajectory_csv(trajectory, out / "trajectory.csv"),
        write_events_csv(trajectory.events, out / "events.csv"),
        write_positions_csv(trajectory, [a.name for a in scenario.agents], out / "positions.csv"),
    ]
    stats = reduce_runs([trajectory], 1)
    decay = decay_check(stats, report.gamma, report.M)
    triggers = trigger_report([trajectory.events], scenario.trigger.delta, scenario.sim.horizon)
    write_report(
        {
            "scenario": scenario.name,
            "seed": seed,
            "certificate": report.to_dict(),
            "certified": report.passed,
            "triggers": triggers.to_dict(),
            "decay": decay.to_dict(),
        },
        out / "report.json",
    )
    if args.gnuplot:
        write_gnuplot_scripts(out, [p.name for p in written])

    min_gap = "n/a" if triggers.min_gap is None else f"{triggers.min_gap:.6g}"
    print(
        f"events={len(trajectory.events)} min_gap={min_gap} "
        f"certificate={certificate} "
        f"decay={'pass' if decay.passed else 'fail'} (margin {decay.margin:.3g}) "
        f"reduction={100 * triggers.reduction:.1f}% vs {triggers.baseline} periodic updates"
    )
    return EXIT_OK


def cmd_ensemble(scenario: Scenario, args: argparse.Namespace) -> int:
    """Run the Monte Carlo ensemble and write ensemble.csv and report.json."""
    report = _matching_gate(scenario, args.strict)
    if report is None:
        return EXIT_INVALID
    certificate = _warn_uncertified(scenario, report)
    changes: Dict[str, int] = {}
    if args.runs is not None:
        changes["n_runs"] = args.runs
    if args.seed is not None:
        changes["master_seed"] = args.seed
    sim = dataclasses.replace(scenario.sim, **changes)

    stats = run_ensemble(scenario, sim=sim, mode=_mode(args))
    decay = decay_check(stats, report.gamma, report.M)
    triggers = trigger_report(stats.logs, scenario.trigger.delta, sim.horizon)

    out = Path(args.out)
    written = [write_ensemble_csv(stats, report.M, report.gamma, out / "ensemble.csv")]
    write_report(
        {
            "scenario": scenario.name,
            "runs": sim.n_runs,
            "excluded": stats.excluded,
            "certificate": report.to_dict(),
            "certified": report.passed,
            "triggers": triggers.to_dict(),
            "decay": decay.to_dict(),
        },
        out / "report.json",
    )
    if args.gnuplot:
        write_gnuplot_scripts(out, [p.name for p in written])

    print(
        f"runs={sim.n_runs} excluded={len(stats.excluded)} "
        f"mean_events={triggers.mean_count:.2f} "
        f"gaps=[{_num(stats.gap_min)}, {_num(stats.gap_mean)}, {_num(stats.gap_max)}] "
        f"zeno_violations={triggers.zeno_violations} "
        f"certificate={certificate} "
        f"decay={'pass' if decay.passed else 'fail'} (margin {decay.margin:.3g}) "
        f"reduction={100 * triggers.reduction:.1f}%"
    )
    return EXIT_OK


def _num(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.6g}"


def cmd_baseline(scenario: Scenario, args: argparse.Namespace) -> int:
    """Compare the event-triggered schedule with the fixed-period one on the same noise."""
    if _matching_gate(scenario, args.strict) is None:
        return EXIT_INVALID
    seed = args.seed if args.seed is not None else derive_run_seed(scenario.sim.master_seed, 0)
    event = run_trajectory(scenario, seed, schedule="event")
    periodic = run_trajectory(scenario, seed, schedule="periodic")
    triggers = trigger_report([event.events], scenario.trigger.delta, scenario.sim.horizon)

    out = Path(args.out)
    written = [
        write_events_csv(event.events, out / "events.csv"),
        write_events_csv(periodic.events, out / "baseline_events.csv"),
    ]
    write_report(
        {
            "scenario": scenario.name,
            "seed": seed,
            "event_count": len(event.events),
            "periodic_count": len(periodic.events),
            "final_sq_norm": {
                "event": float(event.sq_norm[-1]),
                "periodic": float(periodic.sq_norm[-1]),
            },
            "triggers": triggers.to_dict(),
        },
        out / "report.json",
    )
    if args.gnuplot:
        write_gnuplot_scripts(out, [p.name for p in written])
    print(
        f"event-triggered={len(event.events)} periodic={len(periodic.events)} "
        f"reduction={100 * triggers.reduction:.1f}%"
    )
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "run": cmd_run,
    "ensemble": cmd_ensemble,
    "baseline": cmd_baseline,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "scenario",
        help=f"Scenario YAML file or bundled name ({', '.join(list_bundled_scenarios())})",
    )
    common.add_argument("--out", default="output", help="Output directory (default: output)")
    common.add_argument("--gnuplot", action="store_true", help="Write gnuplot scripts")
    common.add_argument(
        "--strict", action="store_true", help="Fail when the matching condition does not hold"
    )
    common.add_argument("--log-level", default=None, help="Log level (default from config)")

    parser = argparse.ArgumentParser(
        prog="petic",
        description="Periodic event-triggered impulsive consensus of heterogeneous "
        "stochastic agents",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="Check assumptions and the certificate")

    run = sub.add_parser("run", parents=[common], help="Simulate one sample path")
    run.add_argument("--seed", type=int, default=None, help="Run seed")
    run.add_argument("--uncontrolled", action="store_true", help="Disable the controller")

    ensemble = sub.add_parser("ensemble", parents=[common], help="Monte Carlo ensemble")
    ensemble.add_argument("--runs", type=int, default=None, help="Number of runs")
    ensemble.add_argument("--seed", type=int, default=None, help="Master seed")
    ensemble.add_argument("--uncontrolled", action="store_true", help="Disable the controller")

    baseline = sub.add_parser("baseline", parents=[common], help="Compare with periodic control")
    baseline.add_argument("--seed", type=int, default=None, help="Run seed")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the petic command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        scenario = load_scenario(args.scenario)
        return COMMANDS[args.command](scenario, args)
    except (ScenarioParseError, ConfigurationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalBlowupError as e:
        print(f"error: numerical blowup: {e}", file=sys.stderr)
        return EXIT_BLOWUP
    except EnsembleFailureError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
