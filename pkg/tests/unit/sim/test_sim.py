"""Unit tests for flownet.sim: RK4 integration, steady-state detection and output files."""

import numpy as np
import pytest

from flownet.config.schema import ToleranceConfig
from flownet.dynamics import ControllerSpec, Hamiltonian
from flownet.exceptions import DimensionError, DivergenceError, FlownetError
from flownet.graph import DirectedGraph, FlowConstraints, minimal_cycle_cover
from flownet.scenario import Scenario, five_vertex_example
from flownet.sim import (
    IntegratorParams,
    Trajectory,
    detect_steady,
    integrate,
    integrate_until_settled,
    plot_trajectory_svg,
    read_trajectory_csv,
    richardson_ratio,
    rk4_step,
    steady_rates,
    summarize_terminal,
    write_trajectory_csv,
)

# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


def _pi_triangle(horizon: float = 40.0, step: float = 0.05, stride: int = 20) -> Scenario:
    return Scenario(
        name="pi-triangle",
        graph=DirectedGraph(n=3, edges=((0, 1), (1, 2), (2, 0))),
        hamiltonian=Hamiltonian.quadratic(),
        controller=ControllerSpec.pi([1.0, 1.0, 1.0]),
        x0=(1.0, 2.0, 6.0),
        xc0=(0.0, 0.0, 0.0),
        integrator=IntegratorParams(step=step, horizon=horizon, stride=stride),
    )


@pytest.fixture
def pi_triangle() -> Scenario:
    return _pi_triangle()


@pytest.fixture(scope="module")
def example_run() -> Trajectory:
    return integrate(five_vertex_example(), lyapunov=True)


# ---------------------------------------------------------------------------
# Parameters and trajectory type
# ---------------------------------------------------------------------------


class TestIntegratorParams:
    """Validation and step counting."""

    def test_defaults(self) -> None:
        params = IntegratorParams()
        assert (params.step, params.horizon, params.stride) == (0.01, 100.0, 10)
        assert params.n_steps == 10000

    def test_partial_last_step(self) -> None:
        assert IntegratorParams(step=0.3, horizon=1.0).n_steps == 4

    def test_rounding_does_not_add_a_step(self) -> None:
        assert IntegratorParams(step=0.1, horizon=1.0).n_steps == 10

    def test_zero_horizon(self) -> None:
        assert IntegratorParams(horizon=0.0).n_steps == 0

    @pytest.mark.parametrize(
        "kwargs",
        [{"step": 0.0}, {"step": float("inf")}, {"horizon": -1.0}, {"stride": 0}, {"stride": 1.5}, {"stride": True}],
    )
    def test_invalid(self, kwargs: dict) -> None:
        with pytest.raises(FlownetError):
            IntegratorParams(**kwargs)

    def test_to_dict(self) -> None:
        assert IntegratorParams(step=0.5, horizon=2.0, stride=3).to_dict() == {"step": 0.5, "horizon": 2.0, "stride": 3}


class TestTrajectory:
    """Shape and ordering checks."""

    def test_row_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            Trajectory(times=np.zeros(2), x=np.zeros((3, 2)), x_c=np.zeros((2, 1)), u=np.zeros((2, 1)))

    def test_times_must_increase(self) -> None:
        with pytest.raises(FlownetError, match="increasing"):
            Trajectory(times=np.array([0.0, 0.0]), x=np.zeros((2, 2)), x_c=np.zeros((2, 1)), u=np.zeros((2, 1)))

    def test_accessors(self) -> None:
        traj = Trajectory(
            times=np.array([0.0, 1.0]),
            x=np.array([[0.0, 1.0], [2.0, 3.0]]),
            x_c=np.array([[4.0], [5.0]]),
            u=np.array([[6.0], [7.0]]),
        )
        assert (traj.n, traj.m, len(traj)) == (2, 1, 2)
        np.testing.assert_array_equal(traj.final_x, [2.0, 3.0])
        np.testing.assert_array_equal(traj.final_x_c, [5.0])
        np.testing.assert_array_equal(traj.final_u, [7.0])


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


class TestRK4:
    """Single steps and the fixed-step driver."""

    def test_single_step_matches_taylor_polynomial(self) -> None:
        h = 0.1
        out = rk4_step(lambda s: -s, np.array([1.0]), h)
        expected = 1 - h + h**2 / 2 - h**3 / 6 + h**4 / 24
        assert out[0] == pytest.approx(expected, rel=1e-15)

    def test_zero_horizon_returns_initial_state(self, pi_triangle: Scenario) -> None:
        traj = integrate(pi_triangle, IntegratorParams(horizon=0.0))
        assert len(traj) == 1
        np.testing.assert_array_equal(traj.final_x, pi_triangle.x0)

    def test_last_step_lands_on_horizon(self, pi_triangle: Scenario) -> None:
        traj = integrate(pi_triangle, IntegratorParams(step=0.1, horizon=0.25, stride=1))
        np.testing.assert_allclose(traj.times, [0.0, 0.1, 0.2, 0.25])
        assert traj.times[-1] == 0.25

    def test_stride_keeps_final_sample(self, pi_triangle: Scenario) -> None:
        traj = integrate(pi_triangle, IntegratorParams(step=0.1, horizon=1.05, stride=4))
        np.testing.assert_allclose(traj.times, [0.0, 0.4, 0.8, 1.05])

    def test_deterministic(self, pi_triangle: Scenario) -> None:
        first, second = integrate(pi_triangle), integrate(pi_triangle)
        np.testing.assert_array_equal(first.x, second.x)
        np.testing.assert_array_equal(first.u, second.u)

    def test_pi_reaches_consensus_at_average(self, pi_triangle: Scenario) -> None:
        traj = integrate(pi_triangle)
        assert traj.summary is not None
        assert traj.summary.consensus
        assert traj.summary.alpha == pytest.approx(3.0, abs=1e-6)
        assert traj.x.sum(axis=1) == pytest.approx(np.full(len(traj), 9.0))

    def test_divergence_detected(self, pi_triangle: Scenario) -> None:
        with pytest.raises(DivergenceError) as info:
            integrate(pi_triangle, tolerances=ToleranceConfig(divergence_bound=1.0))
        assert info.value.time == 0.0

    def test_richardson_ratio_fourth_order(self) -> None:
        ratio = richardson_ratio(_pi_triangle(), step=0.1, horizon=2.0)
        assert 8.0 <= ratio <= 32.0


class TestIntegrateUntilSettled:
    """Chunked integration up to a settled state or a horizon cap."""

    def test_continues_past_short_chunks(self) -> None:
        run = integrate_until_settled(_pi_triangle(horizon=2.0, stride=4), max_horizon=200.0)
        assert run.summary.steady and run.summary.consensus
        assert run.summary.alpha == pytest.approx(3.0, abs=1e-4)
        assert run.times[0] == 0.0
        assert 2.0 < run.times[-1] < 200.0
        assert run.times[-1] / 2.0 == pytest.approx(round(run.times[-1] / 2.0))

    def test_chunks_reproduce_one_long_run(self) -> None:
        chunked = integrate_until_settled(_pi_triangle(horizon=2.0, stride=4), max_horizon=4.0)
        single = integrate(_pi_triangle(horizon=4.0, stride=4))
        assert len(chunked) == len(single) == 21
        np.testing.assert_allclose(chunked.times, single.times, rtol=1e-12)
        np.testing.assert_allclose(chunked.x, single.x, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(chunked.x_c, single.x_c, rtol=1e-12, atol=1e-12)

    def test_stops_at_cap_without_consensus(self) -> None:
        scenario = Scenario(
            name="stuck-edge",
            graph=DirectedGraph(n=2, edges=((0, 1),)),
            hamiltonian=Hamiltonian.quadratic(),
            controller=ControllerSpec.saturated_pi(FlowConstraints.uniform(1, 0.0, 1.0)),
            x0=(0.0, 1.0),
            xc0=(0.0,),
            integrator=IntegratorParams(step=0.1, horizon=3.0, stride=5),
        )
        run = integrate_until_settled(scenario, max_horizon=10.0, lyapunov=True)
        assert run.times[-1] == pytest.approx(10.0)
        assert not run.summary.consensus
        assert run.lyapunov is not None
        assert run.lyapunov.shape == (len(run),)

    def test_cap_below_one_chunk_runs_once(self, pi_triangle: Scenario) -> None:
        run = integrate_until_settled(pi_triangle, max_horizon=1.0)
        assert run.times[-1] == pytest.approx(pi_triangle.integrator.horizon)


class TestFiveVertexRun:
    """The five-vertex example settles away from consensus."""

    def test_steady(self, example_run: Trajectory) -> None:
        assert example_run.summary is not None
        assert example_run.summary.steady

    def test_not_consensus(self, example_run: Trajectory) -> None:
        assert not example_run.summary.consensus
        assert example_run.summary.spread >= 0.1

    def test_shifted_flows_are_half_multiplicities(self, example_run: Trajectory) -> None:
        t = minimal_cycle_cover(five_vertex_example().graph).multiplicity_array()
        np.testing.assert_allclose(example_run.shifted_flows[-1], 0.5 * t, atol=1e-3)

    def test_interior_edge_levels_agree(self, example_run: Trajectory) -> None:
        assert example_run.final_x[1] == pytest.approx(example_run.final_x[2], abs=1e-3)

    def test_total_is_conserved(self, example_run: Trajectory) -> None:
        assert example_run.x.sum(axis=1) == pytest.approx(np.full(len(example_run), 20.0))

    def test_lyapunov_non_increasing(self, example_run: Trajectory) -> None:
        v = example_run.lyapunov
        assert v is not None
        assert np.all(np.diff(v) <= 1e-9 * (1.0 + np.abs(v[:-1])))


# ---------------------------------------------------------------------------
# Steady-state detection
# ---------------------------------------------------------------------------


class TestSteadyState:
    """Rates of the vertex state and of the realized flows."""

    def test_equilibrium_is_steady(self, pi_triangle: Scenario) -> None:
        loop = pi_triangle.closed_loop()
        assert detect_steady(loop, np.full(3, 2.0), np.zeros(3))

    def test_moving_state_is_not(self, pi_triangle: Scenario) -> None:
        loop = pi_triangle.closed_loop()
        assert not detect_steady(loop, np.array([1.0, 2.0, 6.0]), np.zeros(3))

    def test_saturated_edge_has_zero_flow_rate(self) -> None:
        scenario = Scenario(
            name="stuck",
            graph=DirectedGraph(n=2, edges=((0, 1),)),
            hamiltonian=Hamiltonian.quadratic(),
            controller=ControllerSpec.saturated_pi(FlowConstraints.uniform(1, 0.0, 1.0)),
            x0=(0.0, 1.0),
            xc0=(0.0,),
        )
        max_rate, flow_rate = steady_rates(scenario.closed_loop(), np.array([0.0, 1.0]), np.array([5.0]))
        assert max_rate == 0.0
        assert flow_rate == 0.0

    def test_summary_reports_spread(self, pi_triangle: Scenario) -> None:
        traj = integrate(pi_triangle, IntegratorParams(horizon=0.0))
        summary = summarize_terminal(pi_triangle.closed_loop(), traj)
        assert not summary.consensus
        assert summary.spread == 5.0
        assert summary.alpha == 3.0
        assert set(summary.to_dict()) == {"steady", "consensus", "alpha", "max_rate", "flow_rate", "spread"}


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------


class TestTrajectoryCsv:
    """CSV writing and reading."""

    def test_header(self, pi_triangle: Scenario, tmp_path) -> None:
        path = write_trajectory_csv(integrate(pi_triangle), tmp_path / "run.csv")
        first = path.read_text().splitlines()[0]
        assert first == "t,x_0,x_1,x_2,xc_0,xc_1,xc_2,u_0,u_1,u_2"

    def test_values_read_back_exactly(self, pi_triangle: Scenario, tmp_path) -> None:
        traj = integrate(pi_triangle, lyapunov=True)
        back = read_trajectory_csv(write_trajectory_csv(traj, tmp_path / "run.csv"))
        np.testing.assert_array_equal(back.times, traj.times)
        np.testing.assert_array_equal(back.x, traj.x)
        np.testing.assert_array_equal(back.x_c, traj.x_c)
        np.testing.assert_array_equal(back.u, traj.u)
        np.testing.assert_array_equal(back.lyapunov, traj.lyapunov)

    def test_resummarized_read_matches(self, pi_triangle: Scenario, tmp_path) -> None:
        traj = integrate(pi_triangle)
        back = read_trajectory_csv(write_trajectory_csv(traj, tmp_path / "run.csv"))
        assert summarize_terminal(pi_triangle.closed_loop(), back) == traj.summary

    def test_single_row_for_zero_horizon(self, pi_triangle: Scenario, tmp_path) -> None:
        path = write_trajectory_csv(integrate(pi_triangle, IntegratorParams(horizon=0.0)), tmp_path / "run.csv")
        assert len(path.read_text().splitlines()) == 2

    def test_rejects_foreign_header(self, tmp_path) -> None:
        path = tmp_path / "other.csv"
        path.write_text("time,a,b\n0,1,2\n")
        with pytest.raises(FlownetError):
            read_trajectory_csv(path)

    def test_rejects_reordered_columns(self, tmp_path) -> None:
        path = tmp_path / "other.csv"
        path.write_text("t,xc_0,x_0,u_0\n0,1,2,3\n")
        with pytest.raises(FlownetError, match="order"):
            read_trajectory_csv(path)


class TestSvgPlot:
    """Standalone SVG output."""

    def test_writes_svg(self, pi_triangle: Scenario, tmp_path) -> None:
        path = plot_trajectory_svg(integrate(pi_triangle), tmp_path / "run.svg", title="triangle")
        text = path.read_text()
        assert "<svg" in text
        assert "<image" not in text

    def test_byte_identical_reruns(self, pi_triangle: Scenario, tmp_path) -> None:
        traj = integrate(pi_triangle)
        first = plot_trajectory_svg(traj, tmp_path / "a.svg").read_bytes()
        second = plot_trajectory_svg(traj, tmp_path / "b.svg").read_bytes()
        assert first == second
