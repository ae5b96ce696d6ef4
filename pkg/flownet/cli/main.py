"""
flownet command line.

Every subcommand prints one JSON document on stdout; logging goes to stderr.
Exit codes: 0 on success, 1 when a predicate subcommand answers "no"
(infeasible matching, balanced graph, failing suite), 2 on errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from flownet.analysis.consensus import classify_equilibrium
from flownet.analysis.matching import PermissionSet, solve_matching
from flownet.analysis.predictor import predict_convergence
from flownet.config.parser import load_config
from flownet.config.schema import FlownetConfig, ToleranceConfig
from flownet.exceptions import FlownetError
from flownet.graph.connectivity import (
    is_balanced,
    is_strongly_connected,
    is_weakly_connected,
    strongly_connected_wrt_constraints,
    weak_components,
)
from flownet.graph.cycles import minimal_cycle_cover
from flownet.scenario.counterexample import build_counterexample
from flownet.scenario.parser import load_graph, load_scenario, save_scenario
from flownet.scenario.presets import PRESETS, get_preset
from flownet.scenario.schema import Scenario
from flownet.sim.csv_io import write_trajectory_csv
from flownet.sim.integrator import integrate
from flownet.sim.plotting import plot_trajectory_svg
from flownet.sim.schema import IntegratorParams
from flownet.verify.suites import SuiteRunner

logger = logging.getLogger("flownet.cli")

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_ERROR = 2

SCENARIO_HELP = f"Scenario JSON file or preset name ({', '.join(PRESETS)})"


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _emit(report: dict[str, Any], pretty: bool) -> None:
    text = json.dumps(report, indent=2 if pretty else None, sort_keys=False)
    sys.stdout.write(text + "\n")


def resolve_scenario(ref: str) -> Scenario:
    """Scenario from a JSON file, or the preset named ``ref`` when no such file exists."""
    if ref in PRESETS and not Path(ref).exists():
        return get_preset(ref)
    return load_scenario(ref)


def scenario_tolerances(config: FlownetConfig, scenario: Scenario) -> ToleranceConfig:
    """Configured tolerances with the scenario's own overrides applied."""
    if scenario.tolerances is None:
        return config.tolerances
    return dataclasses.replace(
        config.tolerances,
        consensus=scenario.tolerances.consensus,
        steady_rate=scenario.tolerances.steady_rate,
    )


def analyze_report(scenario: Scenario, config: FlownetConfig) -> dict[str, Any]:
    """Structural facts, matching and the convergence verdict of one scenario."""
    g = scenario.graph
    c = scenario.constraints
    tol = scenario_tolerances(config, scenario)
    strongly = is_strongly_connected(g)
    pset = PermissionSet.from_constraints(c) if c is not None else None
    matching = solve_matching(
        g,
        scenario.disturbance,
        pset,
        rank_tol=tol.matching_rank,
        residual_tol=tol.matching_residual,
        margin=tol.permission_margin,
    )
    initial = classify_equilibrium(np.array(scenario.x0), np.array(scenario.xc0), scenario, tol=tol.equilibrium)
    cover = minimal_cycle_cover(g, max_edges=config.cover.exact_max_edges) if strongly else None
    return {
        "scenario": scenario.name,
        "n": g.n,
        "m": g.m,
        "weakly_connected": is_weakly_connected(g),
        "components": weak_components(g),
        "strongly_connected": strongly,
        "balanced": is_balanced(g),
        "strongly_connected_wrt_constraints": (
            None if c is None else strongly_connected_wrt_constraints(g, c)
        ),
        "reversed_edges": scenario.metadata.get("reversed_edges", []),
        "cycle_cover": None if cover is None else cover.summary(),
        "permission_set": None if pset is None else pset.to_dict(),
        "matching": matching.to_dict(),
        "initial_state": initial.to_dict(),
        "verdict": predict_convergence(scenario).to_dict(),
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace, config: FlownetConfig) -> int:
    _emit(analyze_report(resolve_scenario(args.scenario), config), args.pretty)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, config: FlownetConfig) -> int:
    scenario = resolve_scenario(args.scenario)
    trajectory = integrate(scenario, tolerances=scenario_tolerances(config, scenario), lyapunov=args.lyapunov)
    report: dict[str, Any] = {
        "scenario": scenario.name,
        "samples": len(trajectory),
        "final_time": float(trajectory.times[-1]),
        "final_x": trajectory.final_x.tolist(),
        "final_u": trajectory.final_u.tolist(),
        "summary": trajectory.summary.to_dict() if trajectory.summary else None,
    }
    if trajectory.shifted_flows is not None:
        report["final_shifted_flows"] = trajectory.shifted_flows[-1].tolist()
    if args.csv:
        report["csv"] = str(write_trajectory_csv(trajectory, args.csv))
    if args.svg:
        report["svg"] = str(plot_trajectory_svg(trajectory, args.svg, title=scenario.name))
    _emit(report, args.pretty)
    return EXIT_OK


def cmd_match(args: argparse.Namespace, config: FlownetConfig) -> int:
    scenario = resolve_scenario(args.scenario)
    tol = scenario_tolerances(config, scenario)
    c = scenario.constraints
    pset = PermissionSet.from_constraints(c) if c is not None else None
    result = solve_matching(
        scenario.graph,
        scenario.disturbance,
        pset,
        rank_tol=tol.matching_rank,
        residual_tol=tol.matching_residual,
        margin=tol.permission_margin,
    )
    report = {"scenario": scenario.name, **result.to_dict()}
    if pset is not None:
        report["permission_set"] = pset.to_dict()
    _emit(report, args.pretty)
    return EXIT_OK if result.feasible else EXIT_FALSE


def cmd_counterexample(args: argparse.Namespace, config: FlownetConfig) -> int:
    if args.graph in PRESETS and not Path(args.graph).exists():
        g = get_preset(args.graph).graph
    else:
        g = load_graph(args.graph)
    scenario = build_counterexample(g, max_edges=config.cover.exact_max_edges)
    if scenario is None:
        _emit({"n": g.n, "m": g.m, "balanced": True, "scenario": None}, args.pretty)
        return EXIT_FALSE
    defaults = config.integrator
    scenario = scenario.with_updates(
        integrator=IntegratorParams(step=defaults.step, horizon=defaults.horizon, stride=defaults.stride)
    )
    report: dict[str, Any] = {"n": g.n, "m": g.m, "balanced": False, "metadata": scenario.metadata}
    if args.out:
        report["scenario"] = str(save_scenario(scenario, args.out))
    else:
        report["scenario"] = scenario.to_dict()
    _emit(report, args.pretty)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: FlownetConfig) -> int:
    runner = SuiteRunner(config, seed=args.seed, count=args.count)
    results = runner.run_all() if args.suite == "all" else [runner.run(args.suite)]
    _emit(
        {
            "passed": all(r.passed for r in results),
            "suites": [r.to_dict(include_cases=args.cases) for r in results],
        },
        args.pretty,
    )
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


COMMANDS: dict[str, Callable[[argparse.Namespace, FlownetConfig], int]] = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "match": cmd_match,
    "counterexample": cmd_counterexample,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flownet",
        description="Simulate and analyze distribution networks under (saturated) PI flow control",
    )
    parser.add_argument("--config", help="YAML configuration file (default: ./.flownet.yml if present)")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--pretty", action="store_true", help="Indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Structural analysis and convergence verdict")
    analyze.add_argument("scenario", help=SCENARIO_HELP)

    simulate = sub.add_parser("simulate", help="Integrate a scenario and summarize the end state")
    simulate.add_argument("scenario", help=SCENARIO_HELP)
    simulate.add_argument("--csv", help="Write the sampled trajectory to this CSV file")
    simulate.add_argument("--svg", help="Plot the vertex states to this SVG file")
    simulate.add_argument("--lyapunov", action="store_true", help="Record the applicable Lyapunov function")

    match = sub.add_parser("match", help="Solve the matching condition (exit 1 when infeasible)")
    match.add_argument("scenario", help=SCENARIO_HELP)

    counter = sub.add_parser("counterexample", help="Non-consensus scenario for an unbalanced graph")
    counter.add_argument("graph", help="Graph JSON file ({n, edges}), a scenario file or a preset name")
    counter.add_argument("--out", help="Write the scenario here instead of printing it")

    verify = sub.add_parser("verify", help="Run a verification suite (exit 1 on failure)")
    verify.add_argument("--suite", default="all", choices=SuiteRunner.names())
    verify.add_argument("--count", type=int, default=None, help="Cases per randomized suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--cases", action="store_true", help="Report every case, not only failures")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = load_config(args.config)
        return COMMANDS[args.command](args, config)
    except (FlownetError, OSError, ValueError) as exc:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"flownet: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
