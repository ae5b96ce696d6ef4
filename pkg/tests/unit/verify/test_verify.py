"""Unit tests for flownet.verify: suite execution, result reporting and quick suite runs."""

from collections.abc import Iterator

import numpy as np
import pytest

from flownet.graph import DirectedGraph, is_balanced
from flownet.scenario import five_vertex_example, five_vertex_graph, strongly_connected_digraphs
from flownet.scenario.generators import canonical_form
from flownet.sim import IntegratorParams, Trajectory, integrate
from flownet.verify import CaseResult, SuiteResult, SuiteRunner, conservation_error, lyapunov_monotone

UNBALANCED = [g for g in strongly_connected_digraphs(4, 8, min_n=2) if not is_balanced(g)]
COLLAPSING_EDGES = ((0, 1), (0, 2), (0, 3), (1, 0), (1, 2), (2, 0), (2, 1), (3, 1))

# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


class _ScriptedRunner(SuiteRunner):
    """Runner with hand-written suites for exercising the execution loop."""

    SUITES = {
        **SuiteRunner.SUITES,
        "scripted": "_suite_scripted",
        "broken-generator": "_suite_broken_generator",
        "empty": "_suite_empty",
    }

    def _suite_scripted(self, rng: np.random.Generator) -> list:
        return [
            ("ok", lambda: (True, "fine")),
            ("fails", lambda: (False, "wrong answer")),
            ("raises", lambda: 1 / 0),
        ]

    def _suite_broken_generator(self, rng: np.random.Generator) -> Iterator:
        yield "first", lambda: (True, "fine")
        raise RuntimeError("generator broke")

    def _suite_empty(self, rng: np.random.Generator) -> list:
        return []


def _trajectory(values: list[float]) -> Trajectory:
    count = len(values)
    return Trajectory(
        times=np.arange(count, dtype=float),
        x=np.zeros((count, 2)),
        x_c=np.zeros((count, 1)),
        u=np.zeros((count, 1)),
        lyapunov=np.array(values),
    )


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------


class TestSuiteResult:
    """Counting and serialization."""

    def _result(self) -> SuiteResult:
        return SuiteResult(
            name="demo",
            status="failed",
            cases=[
                CaseResult(0, "a", "passed"),
                CaseResult(1, "b", "failed", message="off"),
                CaseResult(2, "c", "error", message="boom"),
            ],
        )

    def test_counts(self) -> None:
        assert self._result().counts() == {"passed": 1, "failed": 1, "error": 1}

    def test_passed_flag(self) -> None:
        assert not self._result().passed
        assert SuiteResult(name="ok", status="passed").passed

    def test_to_dict_with_cases(self) -> None:
        data = self._result().to_dict()
        assert [c["label"] for c in data["cases"]] == ["a", "b", "c"]
        assert data["started_at"] is None
        assert "failures" not in data

    def test_to_dict_failures_only(self) -> None:
        data = self._result().to_dict(include_cases=False)
        assert "cases" not in data
        assert [c["label"] for c in data["failures"]] == ["b", "c"]


# ---------------------------------------------------------------------------
# Runner mechanics
# ---------------------------------------------------------------------------


class TestSuiteRunner:
    """Case execution, error capture and suite lookup."""

    def test_names_include_all(self) -> None:
        names = SuiteRunner.names()
        assert names[-1] == "all"
        assert {"example", "counterexample", "oracle", "saturation"} <= set(names)

    def test_unknown_suite(self) -> None:
        with pytest.raises(ValueError, match="Unknown suite"):
            SuiteRunner().run("nonexistent")

    def test_case_statuses(self) -> None:
        result = _ScriptedRunner().run("scripted")
        assert result.status == "failed"
        assert [c.status for c in result.cases] == ["passed", "failed", "error"]
        assert result.cases[2].message.startswith("ZeroDivisionError")
        assert result.started_at is not None
        assert result.completed_at >= result.started_at

    def test_generator_failure_is_recorded(self) -> None:
        result = _ScriptedRunner().run("broken-generator")
        assert [c.label for c in result.cases] == ["first", "<generation>"]
        assert result.cases[1].status == "error"
        assert not result.passed

    def test_empty_suite_fails(self) -> None:
        assert _ScriptedRunner().run("empty").status == "failed"


# ---------------------------------------------------------------------------
# Shared checks
# ---------------------------------------------------------------------------


class TestChecks:
    """Lyapunov monotonicity and conservation."""

    def test_monotone(self) -> None:
        ok, _ = lyapunov_monotone(_trajectory([3.0, 2.0, 2.0, 1.0]))
        assert ok

    def test_rise_detected(self) -> None:
        ok, _ = lyapunov_monotone(_trajectory([3.0, 2.0, 2.5]))
        assert not ok

    def test_rounding_within_slack(self) -> None:
        ok, _ = lyapunov_monotone(_trajectory([1.0, 1.0 + 1e-12]))
        assert ok

    def test_without_lyapunov(self) -> None:
        traj = _trajectory([1.0])
        traj.lyapunov = None
        assert lyapunov_monotone(traj) == (True, "no Lyapunov function applies")

    def test_conservation_with_injection(self) -> None:
        scenario = five_vertex_example()
        traj = integrate(scenario, IntegratorParams(step=0.01, horizon=5.0, stride=10))
        assert conservation_error(traj, scenario) <= 1e-9


# ---------------------------------------------------------------------------
# Quick suite runs
# ---------------------------------------------------------------------------


class TestSuites:
    """Small-count runs of the fast suites."""

    @pytest.mark.parametrize("name", ["saturation", "matching", "oracle", "integrator"])
    def test_suite_passes(self, name: str) -> None:
        result = SuiteRunner(seed=1, count=5).run(name)
        assert result.passed, result.to_dict(include_cases=False)

    def test_counterexample_on_example_graph(self) -> None:
        ok, message = SuiteRunner()._counterexample_case(five_vertex_graph())
        assert ok, message

    def test_pi_consensus_suite(self) -> None:
        result = SuiteRunner(seed=3, count=1).run("pi-consensus")
        assert len(result.cases) == 2
        assert result.passed, result.to_dict(include_cases=False)

    def test_seed_is_reproducible(self) -> None:
        first = SuiteRunner(seed=4, count=3).run("matching")
        second = SuiteRunner(seed=4, count=3).run("matching")
        assert [c.label for c in first.cases] == [c.label for c in second.cases]
        assert [c.message for c in first.cases] == [c.message for c in second.cases]

    def test_stuck_edge_case(self) -> None:
        ok, message = SuiteRunner()._stuck_edge_case()
        assert ok, message

    def test_saturated_undisturbed_suite(self) -> None:
        result = SuiteRunner(seed=11, count=2).run("saturated-undisturbed")
        assert len(result.cases) == 3
        assert result.passed, result.to_dict(include_cases=False)


class TestUnbalancedFamily:
    """Every unbalanced strongly connected digraph with n <= 4 and m <= 8."""

    def test_family_is_nonempty(self) -> None:
        assert len(UNBALANCED) > 10
        assert canonical_form(4, COLLAPSING_EDGES) in {g.edges for g in UNBALANCED}

    @pytest.mark.parametrize("g", UNBALANCED, ids=lambda g: f"n{g.n}-{'-'.join(f'{t}{h}' for t, h in g.edges)}")
    def test_counterexample_holds(self, g: DirectedGraph) -> None:
        ok, message = SuiteRunner()._counterexample_case(g)
        assert ok, message
