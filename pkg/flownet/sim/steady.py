"""
Steady-state detection and terminal summaries.

A run is steady when both the vertex state and the realized flows have
stopped moving. The integral state is deliberately not judged: at a
non-consensus equilibrium of the saturated loop it grows linearly while the
clamped flows stay constant.
"""

from __future__ import annotations

import logging

import numpy as np

from flownet.analysis.consensus import consensus_check, gradient_spread
from flownet.config.schema import ToleranceConfig
from flownet.dynamics.closed_loop import ClosedLoop
from flownet.dynamics.controllers import ControllerKind
from flownet.sim.schema import TerminalSummary, Trajectory

logger = logging.getLogger(__name__)


def steady_rates(loop: ClosedLoop, x: np.ndarray, x_c: np.ndarray) -> tuple[float, float]:
    """Return ``(|xdot|_inf, |udot|_inf)`` re-evaluated from the right-hand side.

    ``udot`` is the time derivative of the realized flow along the vector
    field; it vanishes on edges held at a saturation bound.
    """
    xdot, xcdot, _ = loop.evaluate(x, x_c)
    ydot = loop.b.T @ (loop.hamiltonian.hessian_diag(loop.n) * xdot)
    if loop.kind is ControllerKind.PROPORTIONAL:
        udot = -loop.gains * ydot
    elif loop.kind is ControllerKind.PI:
        udot = -loop.gains * ydot - xcdot
    else:
        z = loop.saturation_argument(np.asarray(x, dtype=float), np.asarray(x_c, dtype=float))
        interior = (z > loop.lower) & (z < loop.upper)
        udot = np.where(interior, -ydot - xcdot, 0.0)
    max_rate = float(np.max(np.abs(xdot))) if xdot.size else 0.0
    flow_rate = float(np.max(np.abs(udot))) if udot.size else 0.0
    return max_rate, flow_rate


def detect_steady(loop: ClosedLoop, x: np.ndarray, x_c: np.ndarray, tol_rate: float = 1e-6) -> bool:
    """True when ``|xdot|_inf`` and the flow rate are both below ``tol_rate``."""
    max_rate, flow_rate = steady_rates(loop, x, x_c)
    return max_rate < tol_rate and flow_rate < tol_rate


def summarize_terminal(
    loop: ClosedLoop,
    trajectory: Trajectory,
    tolerances: ToleranceConfig | None = None,
) -> TerminalSummary:
    """Build the terminal summary from the last sample of ``trajectory``."""
    if len(trajectory) == 0:
        raise ValueError("Cannot summarize an empty trajectory")
    tol = tolerances or ToleranceConfig()
    x, x_c = trajectory.final_x, trajectory.final_x_c
    max_rate, flow_rate = steady_rates(loop, x, x_c)
    consensus, alpha = consensus_check(x, loop.hamiltonian, tol.consensus)
    summary = TerminalSummary(
        steady=max_rate < tol.steady_rate and flow_rate < tol.steady_rate,
        consensus=consensus,
        alpha=alpha,
        max_rate=max_rate,
        flow_rate=flow_rate,
        spread=gradient_spread(x, loop.hamiltonian),
    )
    logger.debug("Terminal summary: %s", summary.to_dict())
    return summary
