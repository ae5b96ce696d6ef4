"""
Fixed-step fourth-order Runge-Kutta integration of scenarios.

The stacked state ``[x, x_c]`` is advanced with classical RK4. Samples are
recorded every ``stride`` steps and at the final time; each sample carries
the realized flows and, on request, the value of the applicable Lyapunov
function.
"""

from __future__ import annotations

import dataclasses
import logging
import time
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from flownet.analysis.lyapunov import applicable_lyapunov
from flownet.config.schema import ToleranceConfig
from flownet.dynamics.closed_loop import ClosedLoop, shifted_flows
from flownet.exceptions import DivergenceError
from flownet.sim.schema import IntegratorParams, Trajectory
from flownet.sim.steady import summarize_terminal

if TYPE_CHECKING:
    from flownet.scenario.schema import Scenario

logger = logging.getLogger(__name__)


def rk4_step(f: Callable[[np.ndarray], np.ndarray], state: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of ``state' = f(state)``."""
    k1 = f(state)
    k2 = f(state + 0.5 * h * k1)
    k3 = f(state + 0.5 * h * k2)
    k4 = f(state + h * k3)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_finite(state: np.ndarray, n: int, t: float, bound: float) -> None:
    if not np.all(np.isfinite(state)):
        raise DivergenceError(t, float("inf"))
    norm = float(np.max(np.abs(state[:n]))) if n else 0.0
    if norm > bound:
        raise DivergenceError(t, norm)


def integrate(
    scenario: Scenario,
    params: IntegratorParams | None = None,
    tolerances: ToleranceConfig | None = None,
    lyapunov: bool = False,
) -> Trajectory:
    """Simulate ``scenario`` over ``[0, horizon]`` and summarize the end state.

    ``params`` and ``tolerances`` default to the values carried by the
    scenario. When ``lyapunov`` is set and no Lyapunov function applies, the
    column is omitted.

    Raises:
        DivergenceError: If the state becomes non-finite or leaves the
            divergence bound.
    """
    params = params or scenario.integrator
    tol = tolerances or scenario.tolerances or ToleranceConfig()
    loop: ClosedLoop = scenario.closed_loop()
    n, m = loop.n, loop.m

    value_fn = applicable_lyapunov(scenario) if lyapunov else None
    if lyapunov and value_fn is None:
        logger.warning("No Lyapunov function applies to scenario %r; column omitted", scenario.name)

    state = np.concatenate([np.asarray(scenario.x0, dtype=float), np.asarray(scenario.xc0, dtype=float)])
    _check_finite(state, n, 0.0, tol.divergence_bound)

    times: list[float] = []
    states: list[np.ndarray] = []

    def record(t: float, s: np.ndarray) -> None:
        times.append(t)
        states.append(s.copy())

    started = time.perf_counter()
    steps = params.n_steps
    logger.info(
        "Integrating %r: %d RK4 steps of h=%g to t=%g",
        scenario.name,
        steps,
        params.step,
        params.horizon,
    )
    record(0.0, state)
    t = 0.0
    for k in range(1, steps + 1):
        h = min(params.step, params.horizon - t)
        state = rk4_step(loop.derivative, state, h)
        t = params.horizon if k == steps else k * params.step
        _check_finite(state, n, t, tol.divergence_bound)
        if k % params.stride == 0 or k == steps:
            record(t, state)

    stacked = np.array(states)
    x, x_c = stacked[:, :n], stacked[:, n:]
    u = np.array([loop.flows(xi, xci) for xi, xci in zip(x, x_c, strict=True)]).reshape(len(times), m)
    trajectory = Trajectory(
        times=np.array(times),
        x=x,
        x_c=x_c,
        u=u,
        lyapunov=(
            np.array([value_fn(xi, xci) for xi, xci in zip(x, x_c, strict=True)])
            if value_fn is not None
            else None
        ),
        shifted_flows=(
            shifted_flows(u, scenario.x_c_bar) if scenario.x_c_bar is not None else None
        ),
    )
    trajectory.summary = summarize_terminal(loop, trajectory, tol)
    logger.info(
        "Integration of %r finished in %.1f ms (%d samples, steady=%s, consensus=%s)",
        scenario.name,
        (time.perf_counter() - started) * 1000.0,
        len(trajectory),
        trajectory.summary.steady,
        trajectory.summary.consensus,
    )
    return trajectory


def integrate_until_settled(
    scenario: Scenario,
    max_horizon: float,
    params: IntegratorParams | None = None,
    tolerances: ToleranceConfig | None = None,
    lyapunov: bool = False,
) -> Trajectory:
    """Integrate in chunks of ``params.horizon`` until the run is steady and at consensus.

    Stops after the first chunk whose terminal summary is both steady and in
    consensus, or once ``max_horizon`` is reached; the first chunk always runs
    in full. The chunks are joined into one trajectory on a common time axis.

    Raises:
        DivergenceError: If any chunk diverges.
    """
    params = params or scenario.integrator
    if params.horizon <= 0.0 or max_horizon <= params.horizon:
        return integrate(scenario, params, tolerances, lyapunov)
    chunks: list[Trajectory] = []
    elapsed = 0.0
    current = scenario
    while True:
        horizon = min(params.horizon, max_horizon - elapsed)
        chunk = integrate(current, dataclasses.replace(params, horizon=horizon), tolerances, lyapunov)
        chunk.times = chunk.times + elapsed
        chunks.append(chunk)
        elapsed += horizon
        summary = chunk.summary
        if (summary.steady and summary.consensus) or max_horizon - elapsed <= 1e-9 * max_horizon:
            break
        current = scenario.with_updates(x0=tuple(chunk.final_x), xc0=tuple(chunk.final_x_c))
    if len(chunks) > 1:
        logger.info("Scenario %r ran %d chunk(s) to t=%g", scenario.name, len(chunks), elapsed)
    return _join(chunks)


def _join(chunks: list[Trajectory]) -> Trajectory:
    if len(chunks) == 1:
        return chunks[0]

    def stack(name: str) -> np.ndarray | None:
        values = [getattr(c, name) for c in chunks]
        if any(v is None for v in values):
            return None
        # each later chunk starts with the previous chunk's final sample
        return np.concatenate([values[0]] + [v[1:] for v in values[1:]])

    return Trajectory(
        times=stack("times"),
        x=stack("x"),
        x_c=stack("x_c"),
        u=stack("u"),
        lyapunov=stack("lyapunov"),
        shifted_flows=stack("shifted_flows"),
        summary=chunks[-1].summary,
    )


def final_state(scenario: Scenario, step: float, horizon: float) -> np.ndarray:
    """Vertex state at ``horizon`` with step ``step``, without intermediate samples."""
    params = IntegratorParams(step=step, horizon=horizon, stride=max(1, int(np.ceil(horizon / step))))
    return integrate(scenario, params).final_x


def richardson_ratio(scenario: Scenario, step: float, horizon: float) -> float:
    """Error ratio between steps ``h`` and ``h/2`` measured against an ``h/8`` run.

    Close to 16 for a fourth-order method on a smooth vector field.
    """
    reference = final_state(scenario, step / 8.0, horizon)
    coarse = final_state(scenario, step, horizon)
    fine = final_state(scenario, step / 2.0, horizon)
    ratio = float(np.linalg.norm(coarse - reference) / np.linalg.norm(fine - reference))
    logger.debug("Richardson ratio at h=%g over [0, %g]: %.3f", step, horizon, ratio)
    return ratio

