"""
Non-consensus witnesses for unbalanced networks.

For a strongly connected, unbalanced graph with unit-capacity uni-directional
edges, ``build_counterexample`` produces a saturated-PI scenario with a
matched controller state strictly inside the permission set whose trajectory
stays at a non-consensus equilibrium. The construction starts from a
certified minimal cycle cover with multiplicities ``T``:

- edges covered ``T_max`` times are held at their upper bound,
- single-covered edges on cycles through such an edge are held at zero,
- every other edge carries an interior flow.

The shifted equilibrium flow is then ``lambda * T``, which is a circulation
because ``T`` is a sum of cycle indicators.

When every minimal cover forces all vertices to one value, the builder falls
back to two-level assignments: a raised vertex set ``S`` holds its outgoing
edges at the upper bound and its incoming edges at zero, and a linear program
looks for a circulation ``f`` with ``f`` in ``(1, 2)`` on edges leaving ``S``,
in ``(0, 1)`` on edges entering ``S`` and in ``(0, 2)`` elsewhere.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from flownet.dynamics.controllers import ControllerSpec, DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.exceptions import CertificationError, ConstructionError, PredicateError
from flownet.graph.connectivity import incidence_matrix, is_balanced, is_strongly_connected
from flownet.graph.cycles import MAX_EXACT_EDGES, iter_minimal_cycle_covers
from flownet.graph.schema import CycleCover, DirectedGraph, FlowConstraints
from flownet.scenario.schema import Scenario
from flownet.sim.schema import IntegratorParams

logger = logging.getLogger(__name__)

# Entries of B x_c_bar below this magnitude get no terminal
INJECTION_ATOL = 1e-12
# Smallest distance of a two-level circulation from its interval ends
LEVEL_MIN_SLACK = 1e-6
# Above this many vertices only single raised vertices and their complements are tried
LEVEL_MAX_SUBSET_VERTICES = 12


class _OrderingConflict(Exception):
    """The gradient ordering of one cover collapses to consensus."""


def choose_lambda(t_max: int) -> float:
    """Midpoint of ``(1/t_max, min(1, 2/t_max))``."""
    return 0.5 * (1.0 / t_max + min(1.0, 2.0 / t_max))


def partition_edges(cover: CycleCover) -> tuple[list[int], list[int], list[int]]:
    """Split edges into (upper-saturated, lower-saturated, interior)."""
    t = cover.multiplicity
    t_max = cover.t_max
    upper = [i for i, ti in enumerate(t) if ti == t_max]
    upper_set = set(upper)
    through_max = [c for c in cover.cycles if upper_set.intersection(c)]
    lower = sorted({e for c in through_max for e in c if t[e] == 1} - upper_set)
    taken = upper_set | set(lower)
    interior = [i for i in range(len(t)) if i not in taken]
    return upper, lower, interior


def matched_state(
    cover: CycleCover, lam: float, upper: list[int], lower: list[int]
) -> np.ndarray:
    """Controller state ``x_c_bar`` in ``(0, 1)^m`` with ``lambda*T - x_c_bar`` in ``[0, 1]``."""
    t = cover.multiplicity_array().astype(float)
    x_c_bar = np.empty(t.shape[0])
    for i, ti in enumerate(t):
        target = lam * ti
        if i in upper:
            x_c_bar[i] = target - 1.0
        elif i in lower:
            x_c_bar[i] = lam
        elif 0.0 < target - 0.5 < 1.0:
            x_c_bar[i] = target - 0.5
        else:
            x_c_bar[i] = 0.5 * (max(0.0, target - 1.0) + min(1.0, target))
    return x_c_bar


def vertex_levels(g: DirectedGraph, upper: list[int], lower: list[int], interior: list[int]) -> np.ndarray:
    """Integer vertex values meeting the equilibrium ordering.

    Interior edges join vertices of equal value. Upper-saturated edges need
    ``tail >= head`` and lower-saturated edges ``head >= tail``. Mutually
    reachable classes share a value; otherwise values drop by at least one
    along every ordering arc.

    Raises:
        _OrderingConflict: If the ordering forces all vertices to one value.
    """
    classes = nx.utils.UnionFind(range(g.n))
    for j in interior:
        classes.union(*g.edges[j])

    order = nx.DiGraph()
    order.add_nodes_from(classes[v] for v in range(g.n))
    for j in upper:
        tail, head = g.edges[j]
        if classes[tail] != classes[head]:
            order.add_edge(classes[tail], classes[head])
    for j in lower:
        tail, head = g.edges[j]
        if classes[tail] != classes[head]:
            order.add_edge(classes[head], classes[tail])

    condensed = nx.condensation(order)
    level: dict[int, int] = {}
    for node in reversed(list(nx.topological_sort(condensed))):
        level[node] = 1 + max((level[s] for s in condensed.successors(node)), default=-1)
    mapping = condensed.graph["mapping"]
    values = np.array([float(level[mapping[classes[v]]]) for v in range(g.n)])
    if np.ptp(values) == 0.0:
        raise _OrderingConflict
    return values


def _witness(
    g: DirectedGraph,
    nu: np.ndarray,
    xc0: np.ndarray,
    x_c_bar: np.ndarray,
    metadata: dict,
) -> Scenario:
    b = incidence_matrix(g).astype(float)
    return Scenario(
        name=f"counterexample-n{g.n}-m{g.m}",
        notes="Unbalanced network held at a non-consensus equilibrium by saturated PI control.",
        graph=g,
        hamiltonian=Hamiltonian.quadratic(),
        controller=ControllerSpec.saturated_pi(FlowConstraints.uniform(g.m, 0.0, 1.0)),
        disturbance=DisturbanceModel.from_injection(b @ x_c_bar, atol=INJECTION_ATOL),
        x0=tuple(float(v) for v in nu),
        xc0=tuple(float(v) for v in xc0),
        x_c_bar=tuple(float(v) for v in x_c_bar),
        integrator=IntegratorParams(),
        metadata=metadata,
    )


def _construct(g: DirectedGraph, cover: CycleCover) -> Scenario:
    t = cover.multiplicity_array().astype(float)
    lam = choose_lambda(cover.t_max)
    upper, lower, interior = partition_edges(cover)
    x_c_bar = matched_state(cover, lam, upper, lower)
    nu = vertex_levels(g, upper, lower, interior)

    gaps = incidence_matrix(g).astype(float).T @ nu
    # +1/-1 push strictly ordered saturated edges past their bound; edges with
    # equal end values sit exactly at the target flow lambda*T
    offset = -lam * t
    for j in upper:
        if gaps[j] != 0.0:
            offset[j] = -1.0
    for j in lower:
        if gaps[j] != 0.0:
            offset[j] = 1.0

    return _witness(
        g,
        nu,
        offset + x_c_bar,
        x_c_bar,
        {
            "construction": "cycle-cover",
            "lambda": lam,
            "multiplicity": list(cover.multiplicity),
            "cycles": [list(c) for c in cover.cycles],
            "upper_saturated": upper,
            "lower_saturated": lower,
            "levels": [int(v) for v in nu],
            "equilibrium_flows": [float(v) for v in lam * t],
        },
    )


# ---------------------------------------------------------------------------
# Two-level fallback
# ---------------------------------------------------------------------------


def raised_sets(g: DirectedGraph) -> Iterator[frozenset[int]]:
    """Candidate raised vertex sets, smallest first.

    Single vertices with more incoming than outgoing edges come first, since
    the flow leaving a raised set must stay below its in-degree.
    """
    in_degree = np.zeros(g.n, dtype=int)
    out_degree = np.zeros(g.n, dtype=int)
    for tail, head in g.edges:
        out_degree[tail] += 1
        in_degree[head] += 1
    surplus = [v for v in range(g.n) if in_degree[v] > out_degree[v]]
    seen: set[frozenset[int]] = set()
    if g.n <= LEVEL_MAX_SUBSET_VERTICES:
        ordered = itertools.chain(
            ([v] for v in surplus),
            (list(s) for size in range(1, g.n) for s in itertools.combinations(range(g.n), size)),
        )
    else:
        everyone = set(range(g.n))
        ordered = itertools.chain(
            ([v] for v in surplus),
            ([v] for v in range(g.n)),
            (sorted(everyone - {v}) for v in range(g.n)),
        )
    for members in ordered:
        key = frozenset(members)
        if key not in seen:
            seen.add(key)
            yield key


def level_circulation(g: DirectedGraph, raised: frozenset[int]) -> tuple[np.ndarray, float] | None:
    """Circulation for the two-level assignment raising ``raised``.

    Maximizes the smallest distance ``s`` (at most 1/2) from the per-edge
    interval ends. Returns ``(f, s)`` with ``B f = 0`` to rounding, or ``None``
    when ``s`` does not exceed ``LEVEL_MIN_SLACK``.
    """
    b = incidence_matrix(g).astype(float)
    lower = np.zeros(g.m)
    upper = np.full(g.m, 2.0)
    for j, (tail, head) in enumerate(g.edges):
        if tail in raised and head not in raised:
            lower[j] = 1.0
        elif head in raised and tail not in raised:
            upper[j] = 1.0
    # variables [f (m), s]; maximize s subject to lower + s <= f <= upper - s, B f = 0
    column = np.ones((g.m, 1))
    eye = np.eye(g.m)
    a_ub = np.vstack([np.hstack([-eye, column]), np.hstack([eye, column])])
    b_ub = np.concatenate([-lower, upper])
    a_eq = np.hstack([b, np.zeros((g.n, 1))])
    cost = np.zeros(g.m + 1)
    cost[-1] = -1.0
    bounds = [(None, None)] * g.m + [(None, 0.5)]
    solution = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=np.zeros(g.n), bounds=bounds, method="highs")
    if solution.status != 0:
        return None
    slack = float(-solution.fun)
    if slack <= LEVEL_MIN_SLACK:
        return None
    f = solution.x[: g.m]
    # remove the solver's equality residue so that B f vanishes to rounding
    correction, *_ = np.linalg.lstsq(b, b @ f, rcond=None)
    return f - correction, slack


def _construct_from_levels(g: DirectedGraph, raised: frozenset[int], f: np.ndarray, slack: float) -> Scenario:
    nu = np.array([1.0 if v in raised else 0.0 for v in range(g.n)])
    upper = [j for j, (tail, head) in enumerate(g.edges) if tail in raised and head not in raised]
    lower = [j for j, (tail, head) in enumerate(g.edges) if head in raised and tail not in raised]
    u = f / 2.0
    u[upper] = 1.0
    u[lower] = 0.0
    x_c_bar = f - u
    # x_c = -u keeps level edges at u and pushes ordered edges a full unit past their bound
    return _witness(
        g,
        nu,
        -u,
        x_c_bar,
        {
            "construction": "levels",
            "upper_saturated": upper,
            "lower_saturated": lower,
            "levels": [int(v) for v in nu],
            "slack": slack,
            "equilibrium_flows": [float(v) for v in f],
        },
    )


def _from_levels(g: DirectedGraph) -> Scenario | None:
    for raised in raised_sets(g):
        found = level_circulation(g, raised)
        if found is not None:
            return _construct_from_levels(g, raised, *found)
    return None


def build_counterexample(g: DirectedGraph, max_edges: int = MAX_EXACT_EDGES) -> Scenario | None:
    """Non-consensus witness for ``g``; ``None`` when ``g`` is balanced.

    Raises:
        PredicateError: If ``g`` is not strongly connected.
        CertificationError: If ``g`` is too large for a certified minimal cover.
        ConstructionError: If neither a minimal cover nor a two-level
            assignment yields a non-consensus equilibrium.
    """
    if not is_strongly_connected(g):
        raise PredicateError("strongly connected")
    if is_balanced(g):
        logger.debug("Balanced graph: saturated PI reaches consensus, no counterexample")
        return None
    if g.m > max_edges:
        raise CertificationError(
            f"Graph has {g.m} edges; a certified minimal cycle cover needs at most {max_edges}"
        )

    tried = 0
    for cover in iter_minimal_cycle_covers(g, max_edges=max_edges):
        tried += 1
        try:
            scenario = _construct(g, cover)
        except _OrderingConflict:
            logger.debug("Minimal cover %s collapses to consensus; trying the next", cover.cycles)
            continue
        logger.info(
            "Counterexample on n=%d m=%d from cover k=%d (T_max=%d, lambda=%.4f)",
            g.n,
            g.m,
            cover.k,
            cover.t_max,
            scenario.metadata["lambda"],
        )
        return scenario

    logger.debug("All %d minimal cover(s) collapse; trying two-level assignments", tried)
    scenario = _from_levels(g)
    if scenario is None:
        raise ConstructionError(
            f"None of {tried} minimal cycle cover(s) or any two-level assignment admits a non-consensus equilibrium"
        )
    logger.info(
        "Counterexample on n=%d m=%d from raised vertices %s (slack %.3f)",
        g.n,
        g.m,
        [v for v, level in enumerate(scenario.metadata["levels"]) if level],
        scenario.metadata["slack"],
    )
    return scenario
