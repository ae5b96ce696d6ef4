"""
Lyapunov functions of the closed loops.

- proportional, no injection: ``V = H(x)``
- PI with matched ``x_c_bar``: ``V = H(x) + 1/2 |x_c - x_c_bar|^2``
- saturated PI: ``V = 1^T S(z; lo + x_c_bar, hi + x_c_bar) + H(x)`` with
  ``z = -B^T dH/dx - (x_c - x_c_bar)`` and ``S`` the saturation integral.

Along trajectories ``dV/dt = -y^T R y`` for the unsaturated loops and
``dV/dt = -xdot^T Hess(H) xdot`` for the saturated one.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from flownet.analysis.matching import solve_matching
from flownet.dynamics.controllers import ControllerKind
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.dynamics.saturation import saturate, saturation_integral
from flownet.graph.connectivity import incidence_matrix
from flownet.graph.schema import DirectedGraph, FlowConstraints

if TYPE_CHECKING:
    from flownet.scenario.schema import Scenario

logger = logging.getLogger(__name__)

LyapunovFn = Callable[[np.ndarray, np.ndarray], float]


def lyapunov_proportional(x: np.ndarray, H: Hamiltonian) -> float:
    return H.value(x)


def lyapunov_pi(x: np.ndarray, x_c: np.ndarray, x_c_bar: np.ndarray, H: Hamiltonian) -> float:
    deviation = np.asarray(x_c, dtype=float) - np.asarray(x_c_bar, dtype=float)
    return H.value(x) + 0.5 * float(deviation @ deviation)


def _shifted_terms(
    x: np.ndarray,
    x_c: np.ndarray,
    b: np.ndarray,
    H: Hamiltonian,
    c: FlowConstraints,
    x_c_bar: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    shift = np.zeros(c.m) if x_c_bar is None else np.asarray(x_c_bar, dtype=float)
    z = -b.T @ H.gradient(x) - (np.asarray(x_c, dtype=float) - shift)
    return z, c.lower_array + shift, c.upper_array + shift


def lyapunov_saturated(
    x: np.ndarray,
    x_c: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
    c: FlowConstraints,
    x_c_bar: np.ndarray | None = None,
) -> float:
    """Saturated-loop Lyapunov value; ``x_c_bar=None`` is the unshifted form."""
    b = incidence_matrix(g).astype(float)
    z, lower, upper = _shifted_terms(np.asarray(x, dtype=float), x_c, b, H, c, x_c_bar)
    return float(np.sum(saturation_integral(z, lower, upper))) + H.value(x)


def lyapunov_saturated_gradient(
    x: np.ndarray,
    x_c: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
    c: FlowConstraints,
    x_c_bar: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``(dV/dx, dV/dx_c)`` of ``lyapunov_saturated``."""
    x = np.asarray(x, dtype=float)
    b = incidence_matrix(g).astype(float)
    z, lower, upper = _shifted_terms(x, x_c, b, H, c, x_c_bar)
    s = saturate(z, lower, upper)
    return H.gradient(x) - H.hessian_diag(g.n) * (b @ s), -s


def applicable_lyapunov(scenario: Scenario) -> LyapunovFn | None:
    """Pick the Lyapunov function that certifies ``scenario``'s loop, if any.

    The matched state is the scenario's ``x_c_bar`` when it carries one and the
    minimum-norm matching solution otherwise. Returns ``None`` for a
    proportional loop under injection and whenever matching is infeasible.
    """
    g = scenario.graph
    H = scenario.hamiltonian
    kind = scenario.controller.kind
    dist = scenario.disturbance
    undisturbed = dist is None or dist.is_zero

    if kind is ControllerKind.PROPORTIONAL:
        if not undisturbed:
            return None
        return lambda x, x_c: lyapunov_proportional(x, H)

    x_c_bar = scenario.x_c_bar
    if x_c_bar is None and not undisturbed:
        x_c_bar = solve_matching(g, dist).x_c_bar
        if x_c_bar is None:
            logger.debug("Matching infeasible; no Lyapunov function for %r", scenario.name)
            return None
    if kind is ControllerKind.PI:
        matched = np.zeros(g.m) if x_c_bar is None else np.asarray(x_c_bar, dtype=float)
        return lambda x, x_c: lyapunov_pi(x, x_c, matched, H)

    constraints = scenario.controller.constraints
    shift = None if x_c_bar is None else np.asarray(x_c_bar, dtype=float)
    return lambda x, x_c: lyapunov_saturated(x, x_c, g, H, constraints, shift)
