"""
Seeded random scenarios for the verification suites.

Every builder takes a ``numpy.random.Generator`` so a suite run is fully
determined by its seed.
"""

from __future__ import annotations

import numpy as np

from flownet.analysis.matching import PermissionSet
from flownet.dynamics.controllers import ControllerSpec, DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.exceptions import FlownetError
from flownet.graph.connectivity import incidence_matrix, strongly_connected_wrt_constraints
from flownet.graph.schema import DirectedGraph, FlowConstraints
from flownet.scenario.generators import (
    random_balanced_strongly_connected_graph,
    random_weakly_connected_graph,
)
from flownet.scenario.schema import Scenario
from flownet.sim.schema import IntegratorParams

# Initial vertex values are drawn from [-STATE_RANGE, STATE_RANGE]
STATE_RANGE = 5.0


def random_graph(rng: np.random.Generator, max_n: int, max_m: int, min_n: int = 2) -> DirectedGraph:
    n = int(rng.integers(min_n, max_n + 1))
    m = int(rng.integers(n - 1, min(max_m, n * (n - 1)) + 1))
    return random_weakly_connected_graph(rng, n, m)


def paired_disturbance(rng: np.random.Generator, n: int, pairs: int) -> DisturbanceModel | None:
    """Inflow at one vertex matched by an equal outflow at another, ``pairs`` times."""
    if n < 2 or pairs == 0:
        return None
    e = [[0] * (2 * pairs) for _ in range(n)]
    d_bar: list[float] = []
    for p in range(pairs):
        source, sink = rng.choice(n, size=2, replace=False)
        rate = float(rng.uniform(0.1, 1.0))
        e[int(source)][2 * p] = 1
        e[int(sink)][2 * p + 1] = -1
        d_bar += [rate, rate]
    return DisturbanceModel(E=tuple(tuple(row) for row in e), d_bar=tuple(d_bar))


def random_disturbance(rng: np.random.Generator, n: int, k: int) -> DisturbanceModel:
    """Unpaired terminals: random vertex, random sign, random rate."""
    e = [[0] * k for _ in range(n)]
    for j in range(k):
        e[int(rng.integers(0, n))][j] = 1 if rng.random() < 0.5 else -1
    return DisturbanceModel(E=tuple(tuple(row) for row in e), d_bar=tuple(rng.uniform(0.1, 1.0, size=k)))


def pi_scenario(
    rng: np.random.Generator,
    g: DirectedGraph,
    params: IntegratorParams,
    disturbed: bool = True,
) -> Scenario:
    """Unsaturated PI loop with gains in [0.5, 2] and a paired injection."""
    return Scenario(
        name=f"pi-n{g.n}-m{g.m}",
        graph=g,
        hamiltonian=Hamiltonian.quadratic(),
        controller=ControllerSpec.pi(tuple(rng.uniform(0.5, 2.0, size=g.m))),
        disturbance=paired_disturbance(rng, g.n, int(rng.integers(1, 3))) if disturbed else None,
        x0=tuple(rng.uniform(-STATE_RANGE, STATE_RANGE, size=g.n)),
        xc0=tuple(rng.uniform(-1.0, 1.0, size=g.m)),
        integrator=params,
    )


def mixed_constraints(rng: np.random.Generator, m: int) -> FlowConstraints:
    """Each edge uni-directional forward, uni-directional backward or bi-directional."""
    lower: list[float] = []
    upper: list[float] = []
    for _ in range(m):
        capacity = float(rng.uniform(0.5, 2.0))
        pattern = int(rng.integers(0, 3))
        if pattern == 0:
            lower.append(0.0)
            upper.append(capacity)
        elif pattern == 1:
            lower.append(-capacity)
            upper.append(0.0)
        else:
            lower.append(-float(rng.uniform(0.5, 2.0)))
            upper.append(capacity)
    return FlowConstraints(lower=tuple(lower), upper=tuple(upper))


def undisturbed_saturated_scenario(
    rng: np.random.Generator,
    max_n: int,
    max_m: int,
    params: IntegratorParams,
    attempts: int = 200,
) -> Scenario:
    """Saturated PI without injection on a graph strongly connected w.r.t. random mixed constraints."""
    for _ in range(attempts):
        g = random_graph(rng, max_n, max_m)
        c = mixed_constraints(rng, g.m)
        if strongly_connected_wrt_constraints(g, c):
            scenario = Scenario(
                name=f"sat-n{g.n}-m{g.m}",
                graph=g,
                hamiltonian=Hamiltonian.quadratic(),
                controller=ControllerSpec.saturated_pi(c),
                x0=tuple(rng.uniform(-STATE_RANGE, STATE_RANGE, size=g.n)),
                xc0=tuple(rng.uniform(-1.0, 1.0, size=g.m)),
                integrator=params,
            )
            return scenario.canonicalized()
    raise FlownetError(f"No strongly connected instance found in {attempts} attempts")


def _matched_saturated_scenario(
    rng: np.random.Generator,
    g: DirectedGraph,
    c: FlowConstraints,
    params: IntegratorParams,
    name: str,
) -> Scenario:
    pset = PermissionSet.from_constraints(c)
    lower, upper = np.array(pset.lower), np.array(pset.upper)
    # matched state well inside the permission set
    x_c_bar = lower + (upper - lower) * rng.uniform(0.25, 0.75, size=g.m)
    injection = incidence_matrix(g) @ x_c_bar
    return Scenario(
        name=name,
        graph=g,
        hamiltonian=Hamiltonian.quadratic(),
        controller=ControllerSpec.saturated_pi(c),
        disturbance=DisturbanceModel.from_injection(injection, atol=1e-12),
        x0=tuple(rng.uniform(-STATE_RANGE, STATE_RANGE, size=g.n)),
        xc0=tuple(x_c_bar + rng.uniform(-1.0, 1.0, size=g.m)),
        x_c_bar=tuple(x_c_bar),
        integrator=params,
    )


def bidirectional_scenario(
    rng: np.random.Generator,
    max_n: int,
    max_m: int,
    params: IntegratorParams,
) -> Scenario:
    """All edges bi-directional, injection matched inside the permission set."""
    g = random_graph(rng, max_n, max_m)
    c = FlowConstraints(
        lower=tuple(-rng.uniform(0.5, 2.0, size=g.m)),
        upper=tuple(rng.uniform(0.5, 2.0, size=g.m)),
    )
    return _matched_saturated_scenario(rng, g, c, params, f"bidir-n{g.n}-m{g.m}")


def unidirectional_balanced_scenario(
    rng: np.random.Generator,
    max_n: int,
    max_cycles: int,
    params: IntegratorParams,
) -> Scenario:
    """Balanced strongly connected graph, uni-directional edges, matched injection."""
    n = int(rng.integers(2, max_n + 1))
    g = random_balanced_strongly_connected_graph(rng, n, int(rng.integers(0, max_cycles + 1)))
    c = FlowConstraints(lower=(0.0,) * g.m, upper=tuple(rng.uniform(0.5, 2.0, size=g.m)))
    return _matched_saturated_scenario(rng, g, c, params, f"unidir-n{g.n}-m{g.m}")
