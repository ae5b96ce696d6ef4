"""
SuiteRunner: named verification suites over the whole pipeline.

Each suite yields a sequence of cases; every case is a callable returning
``(passed, message)``. Exceptions inside a case mark it as ``error`` without
stopping the suite. Full case counts are the defaults; ``count`` shrinks the
randomized suites for quick runs.
"""

from __future__ import annotations

import functools
import logging
import math
import time
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

import numpy as np

from flownet.analysis.consensus import classify_equilibrium, component_consensus
from flownet.analysis.lyapunov import lyapunov_saturated, lyapunov_saturated_gradient
from flownet.analysis.matching import PermissionSet, solve_matching
from flownet.analysis.predictor import predict_convergence
from flownet.config.schema import FlownetConfig
from flownet.dynamics.closed_loop import ClosedLoop
from flownet.dynamics.controllers import ControllerSpec
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.dynamics.saturation import saturate
from flownet.graph.connectivity import (
    brute_force_scc_wrt_constraints,
    incidence_matrix,
    is_balanced,
    strongly_connected_wrt_constraints,
    weak_components,
)
from flownet.graph.cycles import minimal_cycle_cover, non_overlapping_cycle_cover
from flownet.graph.schema import DirectedGraph, FlowConstraints
from flownet.scenario.counterexample import build_counterexample
from flownet.scenario.generators import enumerate_digraphs, strongly_connected_digraphs
from flownet.scenario.presets import five_vertex_example, five_vertex_graph
from flownet.scenario.schema import Scenario
from flownet.sim.integrator import integrate, integrate_until_settled, richardson_ratio
from flownet.sim.schema import IntegratorParams, Trajectory
from flownet.verify import builders

logger = logging.getLogger(__name__)

UTC = timezone.utc

Outcome = tuple[bool, str]
Case = tuple[str, Callable[[], Outcome]]

# Relative slack allowed per recorded step of a Lyapunov trace
LYAPUNOV_SLACK = 1e-9
CONSERVATION_TOL = 1e-6
FLOW_TOL = 1e-3

PI_PARAMS = IntegratorParams(step=0.05, horizon=500.0, stride=100)
SATURATED_PARAMS = IntegratorParams(step=0.05, horizon=1000.0, stride=200)
COUNTEREXAMPLE_PARAMS = IntegratorParams(step=0.05, horizon=20.0, stride=50)
# Consensus runs continue chunk by chunk up to this time; saturated loops can settle slowly
SETTLE_MAX_HORIZON = 10_000.0


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclass
class CaseResult:
    """Result of one verification case."""

    case_index: int
    label: str
    status: str  # "passed" | "failed" | "error"
    duration_ms: int = 0
    message: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "case_index": self.case_index,
            "label": self.label,
            "status": self.status,
            "duration_ms": self.duration_ms,
            "message": self.message,
        }


@dataclass
class SuiteResult:
    """Aggregated result of one suite."""

    name: str
    status: str  # "passed" | "failed"
    cases: list[CaseResult] = field(default_factory=list)
    duration_ms: int = 0
    started_at: datetime | None = None
    completed_at: datetime | None = None

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    def counts(self) -> dict[str, int]:
        tally = {"passed": 0, "failed": 0, "error": 0}
        for case in self.cases:
            tally[case.status] += 1
        return tally

    def to_dict(self, include_cases: bool = True) -> dict[str, Any]:
        data: dict[str, Any] = {
            "name": self.name,
            "status": self.status,
            "counts": self.counts(),
            "duration_ms": self.duration_ms,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
        }
        if include_cases:
            data["cases"] = [c.to_dict() for c in self.cases]
        else:
            data["failures"] = [c.to_dict() for c in self.cases if c.status != "passed"]
        return data


# ---------------------------------------------------------------------------
# Shared checks
# ---------------------------------------------------------------------------


def lyapunov_monotone(trajectory: Trajectory, slack: float = LYAPUNOV_SLACK) -> Outcome:
    """Recorded Lyapunov values never rise by more than ``slack * (1 + |V|)``."""
    if trajectory.lyapunov is None:
        return True, "no Lyapunov function applies"
    v = trajectory.lyapunov
    excess = (v[1:] - v[:-1]) - slack * (1.0 + np.abs(v[:-1]))
    worst = float(np.max(excess)) if excess.size else -1.0
    return worst <= 0.0, f"largest increase beyond slack {worst:.3e}"


def conservation_error(trajectory: Trajectory, scenario: Scenario) -> float:
    """Largest relative drift of ``1^T x`` from ``1^T x(0) + t 1^T E d_bar``."""
    injection = scenario.closed_loop().injection
    totals = trajectory.x.sum(axis=1)
    expected = totals[0] + trajectory.times * float(injection.sum())
    return float(np.max(np.abs(totals - expected)) / (1.0 + abs(totals[0])))


def _all(checks: Iterable[tuple[bool, str]]) -> Outcome:
    failed = [msg for ok, msg in checks if not ok]
    if failed:
        return False, "; ".join(failed)
    return True, "ok"


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


class SuiteRunner:
    """Runs verification suites by name."""

    SUITES: dict[str, str] = {
        "example": "_suite_example",
        "pi-consensus": "_suite_pi_consensus",
        "saturated-undisturbed": "_suite_saturated_undisturbed",
        "saturated-bidirectional": "_suite_saturated_bidirectional",
        "saturated-unidirectional": "_suite_saturated_unidirectional",
        "counterexample": "_suite_counterexample",
        "cycle-cover": "_suite_cycle_cover",
        "lyapunov": "_suite_lyapunov",
        "saturation": "_suite_saturation",
        "matching": "_suite_matching",
        "oracle": "_suite_oracle",
        "integrator": "_suite_integrator",
        "conservation": "_suite_conservation",
    }

    def __init__(self, config: FlownetConfig | None = None, seed: int = 0, count: int | None = None) -> None:
        self.config = config or FlownetConfig()
        self.seed = seed
        self.count = count

    @classmethod
    def names(cls) -> list[str]:
        return [*cls.SUITES, "all"]

    def run(self, name: str) -> SuiteResult:
        """Run one suite.

        Raises ValueError for unknown suite names (use ``run_all`` for "all").
        """
        if name not in self.SUITES:
            raise ValueError(f"Unknown suite {name!r}; choose from {', '.join(self.names())}")
        rng = np.random.default_rng(self.seed)
        cases: Iterable[Case] = getattr(self, self.SUITES[name])(rng)
        return self._execute(name, cases)

    def run_all(self) -> list[SuiteResult]:
        return [self.run(name) for name in self.SUITES]

    def _n(self, default: int) -> int:
        return default if self.count is None else max(1, self.count)

    # ------------------------------------------------------------------
    # Execution
    # ------------------------------------------------------------------

    def _execute(self, name: str, cases: Iterable[Case]) -> SuiteResult:
        started_at = datetime.now(UTC)
        start = time.monotonic()
        results: list[CaseResult] = []
        iterator: Iterator[Case] = iter(cases)
        while True:
            index = len(results)
            try:
                label, check = next(iterator)
            except StopIteration:
                break
            except Exception as exc:
                logger.exception("Suite %s: case generation failed", name)
                results.append(CaseResult(index, "<generation>", "error", message=str(exc)))
                break
            case_start = time.monotonic()
            try:
                ok, message = check()
                status = "passed" if ok else "failed"
            except Exception as exc:
                logger.debug("Suite %s case %s raised", name, label, exc_info=True)
                ok, status, message = False, "error", f"{type(exc).__name__}: {exc}"
            results.append(
                CaseResult(
                    case_index=index,
                    label=label,
                    status=status,
                    duration_ms=int((time.monotonic() - case_start) * 1000),
                    message=message,
                )
            )
            if status != "passed":
                logger.warning("Suite %s case %s %s: %s", name, label, status, message)

        passed = bool(results) and all(r.status == "passed" for r in results)
        result = SuiteResult(
            name=name,
            status="passed" if passed else "failed",
            cases=results,
            duration_ms=int((time.monotonic() - start) * 1000),
            started_at=started_at,
            completed_at=datetime.now(UTC),
        )
        logger.info("Suite %s %s: %s", name, result.status, result.counts())
        return result

    # ------------------------------------------------------------------
    # Worked example
    # ------------------------------------------------------------------

    def _suite_example(self, rng: np.random.Generator) -> list[Case]:
        scenario = five_vertex_example()
        tol = self.config.tolerances
        run = functools.cache(lambda: integrate(scenario, tolerances=tol, lyapunov=True))

        def steady() -> Outcome:
            s = run().summary
            return s.max_rate < tol.steady_rate, f"|xdot|_inf = {s.max_rate:.3e}"

        def non_consensus() -> Outcome:
            s = run().summary
            return (not s.consensus) and s.spread >= 0.1, f"spread {s.spread:.4f}"

        def flows() -> Outcome:
            t = minimal_cycle_cover(scenario.graph).multiplicity_array()
            error = float(np.max(np.abs(run().shifted_flows[-1] - 0.5 * t)))
            return error <= FLOW_TOL, f"max |u + x_c_bar - T/2| = {error:.3e}"

        def equal_levels() -> Outcome:
            x = run().final_x
            return abs(x[1] - x[2]) <= FLOW_TOL, f"x_1 - x_2 = {x[1] - x[2]:.3e}"

        def classification() -> Outcome:
            traj = run()
            verdict = classify_equilibrium(traj.final_x, traj.final_x_c, scenario, tol=tol.equilibrium)
            return verdict.as_tuple() == (True, False), str(verdict.to_dict())

        def prediction() -> Outcome:
            verdict = predict_convergence(scenario)
            return verdict.consensus_expected is False and verdict.reason == "unbalanced", verdict.reason

        return [
            ("steady", steady),
            ("non-consensus", non_consensus),
            ("equilibrium-flows", flows),
            ("equal-levels", equal_levels),
            ("classification", classification),
            ("prediction", prediction),
            ("lyapunov", lambda: lyapunov_monotone(run())),
        ]

    # ------------------------------------------------------------------
    # Consensus suites
    # ------------------------------------------------------------------

    def _consensus_case(self, scenario: Scenario, expect_alpha: float | None = None) -> Outcome:
        tol = self.config.tolerances
        traj = integrate_until_settled(scenario, SETTLE_MAX_HORIZON, tolerances=tol, lyapunov=True)
        checks = [
            (traj.summary.consensus, f"no consensus (spread {traj.summary.spread:.3e})"),
            lyapunov_monotone(traj),
            (predict_convergence(scenario).consensus_expected is True, "predictor disagrees"),
        ]
        if expect_alpha is not None:
            checks.append(
                (abs(traj.summary.alpha - expect_alpha) <= tol.consensus, f"alpha {traj.summary.alpha} != {expect_alpha}")
            )
        drift = conservation_error(traj, scenario)
        checks.append((drift <= CONSERVATION_TOL, f"conservation drift {drift:.3e}"))
        return _all(checks)

    def _suite_pi_consensus(self, rng: np.random.Generator) -> Iterator[Case]:
        for i in range(self._n(50)):
            g = builders.random_graph(rng, max_n=8, max_m=14)
            scenario = builders.pi_scenario(rng, g, PI_PARAMS)
            yield f"connected-{i}", functools.partial(self._consensus_case, scenario, float(np.mean(scenario.x0)))
        for i in range(self._n(5)):
            first = builders.random_graph(rng, max_n=4, max_m=6)
            second = builders.random_graph(rng, max_n=4, max_m=6)
            g = DirectedGraph(
                n=first.n + second.n,
                edges=first.edges + tuple((t + first.n, h + first.n) for t, h in second.edges),
            )
            scenario = builders.pi_scenario(rng, g, PI_PARAMS, disturbed=False)
            # separate the component averages so global consensus is impossible
            x0 = np.array(scenario.x0)
            x0[first.n :] += 3.0
            yield f"disconnected-{i}", functools.partial(self._disconnected_case, scenario.with_updates(x0=tuple(x0)))

    def _disconnected_case(self, scenario: Scenario) -> Outcome:
        tol = self.config.tolerances
        traj = integrate(scenario, tolerances=tol, lyapunov=True)
        components = weak_components(scenario.graph)
        per_component = component_consensus(traj.final_x, scenario.hamiltonian, components, tol.consensus)
        x0 = np.array(scenario.x0)
        return _all(
            [
                (not traj.summary.consensus, "unexpected global consensus"),
                (all(ok for ok, _ in per_component), "a component did not reach consensus"),
                (
                    all(
                        abs(alpha - float(np.mean(x0[comp]))) <= tol.consensus
                        for (_, alpha), comp in zip(per_component, components, strict=True)
                    ),
                    "component average not conserved",
                ),
                (predict_convergence(scenario).consensus_expected is False, "predictor disagrees"),
                lyapunov_monotone(traj),
            ]
        )

    def _suite_saturated_undisturbed(self, rng: np.random.Generator) -> Iterator[Case]:
        yield "stuck-unidirectional-edge", self._stuck_edge_case
        for i in range(self._n(50)):
            scenario = builders.undisturbed_saturated_scenario(rng, max_n=6, max_m=10, params=SATURATED_PARAMS)
            yield f"random-{i}", functools.partial(self._consensus_case, scenario, float(np.mean(scenario.x0)))

    def _stuck_edge_case(self) -> Outcome:
        g = DirectedGraph(n=2, edges=((0, 1),))
        scenario = Scenario(
            name="stuck-edge",
            graph=g,
            hamiltonian=Hamiltonian.quadratic(),
            controller=ControllerSpec.saturated_pi(FlowConstraints.uniform(1, 0.0, 1.0)),
            x0=(0.0, 1.0),
            xc0=(0.0,),
            integrator=IntegratorParams(step=0.01, horizon=100.0, stride=100),
        )
        traj = integrate(scenario, tolerances=self.config.tolerances, lyapunov=True)
        error = float(np.max(np.abs(traj.final_x - np.array([0.0, 1.0]))))
        return _all(
            [
                (error <= 1e-6, f"terminal state moved by {error:.3e}"),
                (predict_convergence(scenario).consensus_expected is False, "predictor disagrees"),
                lyapunov_monotone(traj),
            ]
        )

    def _suite_saturated_bidirectional(self, rng: np.random.Generator) -> Iterator[Case]:
        for i in range(self._n(30)):
            scenario = builders.bidirectional_scenario(rng, max_n=6, max_m=10, params=SATURATED_PARAMS)
            yield f"random-{i}", functools.partial(self._consensus_case, scenario, float(np.mean(scenario.x0)))

    def _suite_saturated_unidirectional(self, rng: np.random.Generator) -> Iterator[Case]:
        for i in range(self._n(20)):
            scenario = builders.unidirectional_balanced_scenario(rng, max_n=5, max_cycles=2, params=SATURATED_PARAMS)
            yield f"random-{i}", functools.partial(self._consensus_case, scenario, float(np.mean(scenario.x0)))

    # ------------------------------------------------------------------
    # Counterexamples and cycle covers
    # ------------------------------------------------------------------

    def _counterexample_case(self, g: DirectedGraph) -> Outcome:
        tol = self.config.tolerances
        scenario = build_counterexample(g, max_edges=self.config.cover.exact_max_edges)
        if scenario is None:
            return False, "no counterexample for an unbalanced graph"
        meta = scenario.metadata
        flows = np.array(meta["equilibrium_flows"], dtype=float)
        x_c_bar = np.array(scenario.x_c_bar)
        residual = float(np.linalg.norm(incidence_matrix(g) @ x_c_bar - scenario.closed_loop().injection))
        pset = PermissionSet.from_constraints(scenario.constraints)
        ulp = 4 * np.spacing(2.0)
        traj = integrate(scenario, COUNTEREXAMPLE_PARAMS, tolerances=tol, lyapunov=True)
        flow_error = float(np.max(np.abs(traj.shifted_flows[-1] - flows)))
        verdict = classify_equilibrium(traj.final_x, traj.final_x_c, scenario, tol=tol.equilibrium)
        return _all(
            [
                (pset.contains(x_c_bar, tol.permission_margin), "matched state outside (0, 1)^m"),
                (residual <= 1e-10, f"matching residual {residual:.3e}"),
                (
                    all(abs(1.0 + x_c_bar[q] - flows[q]) <= ulp for q in meta["upper_saturated"]),
                    "upper-saturated relation broken",
                ),
                (
                    all(abs(x_c_bar[p] - flows[p]) <= ulp for p in meta["lower_saturated"]),
                    "lower-saturated relation broken",
                ),
                (traj.summary.steady, f"not steady ({traj.summary.max_rate:.3e})"),
                (not traj.summary.consensus, "reached consensus"),
                (flow_error <= FLOW_TOL, f"flows off the equilibrium circulation by {flow_error:.3e}"),
                (verdict.as_tuple() == (True, False), f"classification {verdict.as_tuple()}"),
                lyapunov_monotone(traj),
            ]
        )

    def _suite_counterexample(self, rng: np.random.Generator) -> Iterator[Case]:
        graphs = [g for g in strongly_connected_digraphs(4, 8, min_n=2) if not is_balanced(g)]
        graphs.append(five_vertex_graph())
        if self.count is not None:
            picks = rng.choice(len(graphs) - 1, size=min(self.count, len(graphs) - 1), replace=False)
            graphs = [graphs[int(i)] for i in sorted(picks)] + [graphs[-1]]
        for g in graphs:
            yield f"n{g.n}-{list(g.edges)}", functools.partial(self._counterexample_case, g)

    def _cycle_cover_case(self, g: DirectedGraph) -> Outcome:
        b = incidence_matrix(g)
        balanced = is_balanced(g)
        decomposition = non_overlapping_cycle_cover(g)
        cover = minimal_cycle_cover(g, max_edges=self.config.cover.exact_max_edges)
        t = cover.multiplicity_array()
        rank = int(np.linalg.matrix_rank(b)) if g.m else 0
        checks = [
            ((decomposition is not None) == balanced, f"decomposition exists={decomposition is not None}, balanced={balanced}"),
            (not np.any(b @ t), "B T != 0"),
            (bool(np.all(t >= 1)), "edge left uncovered"),
            (rank == g.n - len(weak_components(g)), f"rank(B) = {rank}"),
        ]
        if decomposition is not None:
            checks.append((cover.k <= decomposition.k, "minimal cover larger than a decomposition"))
        return _all(checks)

    def _suite_cycle_cover(self, rng: np.random.Generator) -> Iterator[Case]:
        for g in strongly_connected_digraphs(4, 8):
            yield f"n{g.n}-{list(g.edges)}", functools.partial(self._cycle_cover_case, g)

    # ------------------------------------------------------------------
    # Lyapunov functions
    # ------------------------------------------------------------------

    def _gradient_case(self, rng: np.random.Generator) -> Outcome:
        g = builders.random_graph(rng, max_n=5, max_m=8)
        c = builders.mixed_constraints(rng, g.m)
        hamiltonian = Hamiltonian.weighted(tuple(rng.uniform(0.5, 2.0, size=g.n)))
        x = rng.uniform(-3.0, 3.0, size=g.n)
        x_c = rng.uniform(-3.0, 3.0, size=g.m)
        x_c_bar = rng.uniform(-0.5, 0.5, size=g.m) if rng.random() < 0.5 else None
        grad_x, grad_xc = lyapunov_saturated_gradient(x, x_c, g, hamiltonian, c, x_c_bar)
        analytic = np.concatenate([grad_x, grad_xc])
        h = 1e-7
        numeric = np.empty_like(analytic)
        point = np.concatenate([x, x_c])
        for i in range(point.size):
            up, down = point.copy(), point.copy()
            up[i] += h
            down[i] -= h
            v_up = lyapunov_saturated(up[: g.n], up[g.n :], g, hamiltonian, c, x_c_bar)
            v_down = lyapunov_saturated(down[: g.n], down[g.n :], g, hamiltonian, c, x_c_bar)
            numeric[i] = (v_up - v_down) / (2 * h)
        error = float(np.max(np.abs(numeric - analytic) / (1.0 + np.abs(analytic))))
        return error <= 1e-6, f"relative gradient error {error:.3e}"

    def _suite_lyapunov(self, rng: np.random.Generator) -> Iterator[Case]:
        params = IntegratorParams(step=0.05, horizon=100.0, stride=10)
        samples = [
            five_vertex_example(),
            builders.pi_scenario(rng, builders.random_graph(rng, 6, 10), params),
            builders.undisturbed_saturated_scenario(rng, 5, 8, params),
            builders.bidirectional_scenario(rng, 5, 8, params),
            builders.unidirectional_balanced_scenario(rng, 4, 2, params),
        ]
        for scenario in samples:
            yield f"monotone-{scenario.name}", functools.partial(
                lambda s: lyapunov_monotone(integrate(s, lyapunov=True)), scenario
            )
        for i in range(self._n(100)):
            yield f"gradient-{i}", functools.partial(self._gradient_case, np.random.default_rng(rng.integers(2**32)))

    # ------------------------------------------------------------------
    # Saturation identities
    # ------------------------------------------------------------------

    def _suite_saturation(self, rng: np.random.Generator) -> list[Case]:
        size = self._n(10_000)
        x = rng.uniform(-10.0, 10.0, size=size)
        eta = rng.uniform(-10.0, 10.0, size=size)
        a = rng.uniform(-5.0, 0.0, size=size)
        b = a + rng.uniform(0.1, 5.0, size=size)

        def clamp() -> Outcome:
            reference = np.array([min(max(xi, ai), bi) for xi, ai, bi in zip(x, a, b, strict=True)])
            return bool(np.array_equal(saturate(x, a, b), reference)), "componentwise clamp"

        def shift() -> Outcome:
            lhs = saturate(x - eta, a, b) + eta
            rhs = saturate(x, a + eta, b + eta)
            scale = np.maximum.reduce([np.abs(x), np.abs(eta), np.abs(a), np.abs(b)])
            worst = float(np.max(np.abs(lhs - rhs) / np.spacing(scale)))
            return worst <= 4.0, f"largest deviation {worst:.1f} ulp"

        def flip() -> Outcome:
            return bool(np.array_equal(saturate(-x, -b, -a), -saturate(x, a, b))), "sign flip"

        def flipped_loop() -> Outcome:
            for _ in range(20):
                g = builders.random_graph(rng, 6, 10)
                c = builders.mixed_constraints(rng, g.m)
                mask = rng.random(g.m) < 0.5
                flipped = FlowConstraints(
                    lower=tuple(np.where(mask, -c.upper_array, c.lower_array)),
                    upper=tuple(np.where(mask, -c.lower_array, c.upper_array)),
                )
                h = Hamiltonian.quadratic()
                state_x = rng.uniform(-3, 3, size=g.n)
                state_c = rng.uniform(-3, 3, size=g.m)
                original = ClosedLoop.build(g, h, ControllerSpec.saturated_pi(c)).evaluate(state_x, state_c)[0]
                reversed_loop = ClosedLoop.build(g.reversed_edges(mask), h, ControllerSpec.saturated_pi(flipped))
                mirrored = reversed_loop.evaluate(state_x, np.where(mask, -state_c, state_c))[0]
                if not np.array_equal(original, mirrored):
                    return False, "reversed edges changed xdot"
            return True, "xdot unchanged under edge reversal"

        return [("clamp", clamp), ("shift", shift), ("flip", flip), ("flipped-loop", flipped_loop)]

    # ------------------------------------------------------------------
    # Matching, oracle, integrator, conservation
    # ------------------------------------------------------------------

    def _matching_case(self, g: DirectedGraph, paired: bool, rng: np.random.Generator) -> Outcome:
        if paired:
            dist = builders.paired_disturbance(rng, g.n, int(rng.integers(1, 3)))
        else:
            dist = builders.random_disturbance(rng, g.n, int(rng.integers(1, 4)))
        net = abs(float(dist.injection().sum())) if dist is not None else 0.0
        result = solve_matching(g, dist)
        checks = [(result.feasible == (net <= 1e-12), f"feasible={result.feasible}, net injection {net:.3e}")]
        if result.feasible:
            checks.append((result.residual <= 1e-10, f"residual {result.residual:.3e}"))
        return _all(checks)

    def _suite_matching(self, rng: np.random.Generator) -> Iterator[Case]:
        for i in range(self._n(100)):
            g = builders.random_graph(rng, 8, 14)
            paired = i % 2 == 0
            yield (
                f"{'paired' if paired else 'unpaired'}-{i}",
                functools.partial(self._matching_case, g, paired, np.random.default_rng(rng.integers(2**32))),
            )

    def _suite_oracle(self, rng: np.random.Generator) -> Iterator[Case]:
        graphs = list(enumerate_digraphs(4, 6))
        target = self._n(500)
        per_graph = max(1, math.ceil(target / len(graphs)))
        for g in graphs:
            for k in range(per_graph):
                c = builders.mixed_constraints(rng, g.m)
                yield f"n{g.n}-{list(g.edges)}-{k}", functools.partial(self._oracle_case, g, c)

    def _oracle_case(self, g: DirectedGraph, c: FlowConstraints) -> Outcome:
        limit = self.config.cover.brute_force_max_bidirectional
        fast = strongly_connected_wrt_constraints(g, c)
        slow = brute_force_scc_wrt_constraints(g, c, max_bidirectional=limit)
        return fast == slow, f"reachability={fast}, enumeration={slow}"

    def _suite_integrator(self, rng: np.random.Generator) -> list[Case]:
        base = five_vertex_example()
        wide = base.with_updates(controller=ControllerSpec.saturated_pi(FlowConstraints.uniform(base.m, -1e3, 1e3)))

        def richardson() -> Outcome:
            ratio = richardson_ratio(wide, step=0.05, horizon=2.0)
            return 8.0 <= ratio <= 32.0, f"error ratio {ratio:.2f}"

        def deterministic() -> Outcome:
            params = IntegratorParams(step=0.01, horizon=5.0, stride=10)
            first, second = integrate(base, params), integrate(base, params)
            return bool(np.array_equal(first.x, second.x) and np.array_equal(first.x_c, second.x_c)), "repeat run"

        return [("richardson", richardson), ("deterministic", deterministic)]

    def _suite_conservation(self, rng: np.random.Generator) -> Iterator[Case]:
        params = IntegratorParams(step=0.05, horizon=100.0, stride=10)
        samples = [
            five_vertex_example(),
            builders.pi_scenario(rng, builders.random_graph(rng, 6, 10), params),
            builders.bidirectional_scenario(rng, 6, 10, params),
        ]
        for scenario in samples:
            yield scenario.name, functools.partial(self._conservation_case, scenario)

    def _conservation_case(self, scenario: Scenario) -> Outcome:
        drift = conservation_error(integrate(scenario), scenario)
        return drift <= CONSERVATION_TOL, f"relative drift {drift:.3e}"
