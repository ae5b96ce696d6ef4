"""
Built-in scenarios.

``five_vertex_example`` is a strongly connected but unbalanced network with
uni-directional unit-capacity edges under the saturated PI loop. Its minimal
cycle cover has multiplicities ``T = (1, 2, 3, 1, 1, 1, 1)`` and it settles at
a non-consensus equilibrium whose shifted flows are ``T / 2``.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from flownet.dynamics.controllers import ControllerSpec, DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.exceptions import ScenarioError
from flownet.graph.connectivity import incidence_matrix
from flownet.graph.schema import DirectedGraph, FlowConstraints
from flownet.scenario.schema import Scenario
from flownet.sim.schema import IntegratorParams

FIVE_VERTEX_EDGES: tuple[tuple[int, int], ...] = (
    (0, 1),
    (1, 2),
    (2, 0),
    (0, 3),
    (3, 2),
    (0, 4),
    (4, 1),
)


def five_vertex_graph() -> DirectedGraph:
    return DirectedGraph(n=5, edges=FIVE_VERTEX_EDGES)


def five_vertex_example() -> Scenario:
    """Saturated PI loop on the five-vertex network, started off equilibrium.

    The injection is ``E d_bar = B x_c_bar`` with ``x_c_bar = 1/2`` on every
    edge, realized with one terminal per vertex of nonzero net injection.
    """
    graph = five_vertex_graph()
    m = graph.m
    x_c_bar = np.full(m, 0.5)
    offset = np.array([1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0])
    return Scenario(
        name="five-vertex-example",
        notes="Strongly connected, unbalanced network; saturated PI settles away from consensus.",
        graph=graph,
        hamiltonian=Hamiltonian.quadratic(),
        controller=ControllerSpec.saturated_pi(FlowConstraints.uniform(m, 0.0, 1.0)),
        disturbance=DisturbanceModel.from_injection(incidence_matrix(graph) @ x_c_bar),
        x0=(3.0, 7.0, 5.0, 1.0, 4.0),
        xc0=tuple(offset + x_c_bar),
        x_c_bar=tuple(x_c_bar),
        integrator=IntegratorParams(step=0.01, horizon=100.0, stride=10),
    )


PRESETS: dict[str, Callable[[], Scenario]] = {
    "five-vertex-example": five_vertex_example,
}


def get_preset(name: str) -> Scenario:
    """Built-in scenario registered under ``name``.

    Raises:
        ScenarioError: If no preset has that name.
    """
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ScenarioError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return factory()
