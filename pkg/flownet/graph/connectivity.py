"""
Incidence matrix and connectivity predicates for directed graphs.

Reachability questions are answered with networkx on a multigraph view of
the edge list; the algebraic characterizations (rank of B, B·1 = 0) are kept
alongside so that both readings can be cross-checked.
"""

from __future__ import annotations

import itertools
import logging

import networkx as nx
import numpy as np

from flownet.exceptions import DimensionError, GraphError, SizeLimitError
from flownet.graph.schema import DirectedGraph, FlowConstraints

logger = logging.getLogger(__name__)

# Largest number of free (bi-directional) edges the brute-force oracle enumerates
MAX_BRUTE_FORCE_BIDIRECTIONAL = 20


def incidence_matrix(g: DirectedGraph) -> np.ndarray:
    """Return the n x m incidence matrix: +1 at the head, -1 at the tail of each edge."""
    b = np.zeros((g.n, g.m), dtype=np.int64)
    for j, (tail, head) in enumerate(g.edges):
        b[head, j] = 1
        b[tail, j] = -1
    return b


def to_networkx(g: DirectedGraph) -> nx.MultiDiGraph:
    """Multigraph view of *g*; edge keys are the edge indices."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(g.n))
    for j, (tail, head) in enumerate(g.edges):
        graph.add_edge(tail, head, key=j)
    return graph


def is_weakly_connected(g: DirectedGraph) -> bool:
    """True when the graph is connected once edge directions are ignored."""
    return nx.is_weakly_connected(to_networkx(g))


def weak_components(g: DirectedGraph) -> list[list[int]]:
    """Vertex sets of the weakly connected components, ordered by smallest vertex."""
    comps = [sorted(c) for c in nx.weakly_connected_components(to_networkx(g))]
    return sorted(comps, key=lambda c: c[0])


def is_strongly_connected(g: DirectedGraph) -> bool:
    """True when every ordered vertex pair is joined by a directed path."""
    return nx.is_strongly_connected(to_networkx(g))


def is_balanced(g: DirectedGraph) -> bool:
    """True when in-degree equals out-degree at every vertex.

    Evaluated both from degree counts and as ``B @ 1 == 0``; the two must agree.
    """
    in_deg = np.bincount(g.heads(), minlength=g.n) if g.m else np.zeros(g.n, dtype=np.int64)
    out_deg = np.bincount(g.tails(), minlength=g.n) if g.m else np.zeros(g.n, dtype=np.int64)
    by_degree = bool(np.array_equal(in_deg, out_deg))
    by_incidence = not np.any(incidence_matrix(g) @ np.ones(g.m, dtype=np.int64))
    if by_degree != by_incidence:
        raise GraphError("Degree count and incidence matrix disagree on balance")
    return by_degree


def canonicalize_orientation(
    g: DirectedGraph,
    c: FlowConstraints,
) -> tuple[DirectedGraph, FlowConstraints, tuple[bool, ...]]:
    """Reverse every edge whose interval only admits non-positive flow.

    A reversed edge maps ``[lo, hi]`` to ``[-hi, -lo]`` so that afterwards every
    interval satisfies ``lo <= 0 < hi``. Edges are reversed only when ``hi == 0``,
    which makes the operation idempotent.

    Returns:
        ``(graph, constraints, flips)`` where ``flips[j]`` marks reversed edges.
    """
    if c.m != g.m:
        raise DimensionError("constraints", (g.m,), (c.m,))
    flips = tuple(hi == 0.0 for hi in c.upper)
    if not any(flips):
        return g, c, flips
    lower = tuple(-hi if flip else lo for lo, hi, flip in zip(c.lower, c.upper, flips, strict=True))
    upper = tuple(-lo if flip else hi for lo, hi, flip in zip(c.lower, c.upper, flips, strict=True))
    logger.debug("Reversed %d edge(s) into a compatible orientation", sum(flips))
    return g.reversed_edges(flips), FlowConstraints(lower=lower, upper=upper), flips


def _admissible_arcs(g: DirectedGraph, c: FlowConstraints) -> nx.MultiDiGraph:
    """Digraph of every direction in which some compatible orientation lets flow pass."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(g.n))
    for j, ((tail, head), lo, hi) in enumerate(zip(g.edges, c.lower, c.upper, strict=True)):
        if hi > 0.0:
            graph.add_edge(tail, head, key=j)
        if lo < 0.0:
            graph.add_edge(head, tail, key=j)
    return graph


def strongly_connected_wrt_constraints(g: DirectedGraph, c: FlowConstraints) -> bool:
    """Strong connectivity with respect to the flow constraints.

    Each bi-directional edge can be reversed independently and a directed path
    uses each edge once, so choosing a compatible orientation per vertex pair is
    the same as reachability in the digraph carrying both directions of every
    bi-directional edge and the admissible direction of every uni-directional one.
    """
    if c.m != g.m:
        raise DimensionError("constraints", (g.m,), (c.m,))
    return nx.is_strongly_connected(_admissible_arcs(g, c))


def brute_force_scc_wrt_constraints(
    g: DirectedGraph,
    c: FlowConstraints,
    max_bidirectional: int = MAX_BRUTE_FORCE_BIDIRECTIONAL,
) -> bool:
    """Reference oracle: enumerate every compatible orientation per vertex pair.

    Raises:
        SizeLimitError: If more than ``max_bidirectional`` edges are bi-directional.
    """
    g, c, _ = canonicalize_orientation(g, c)
    free = [j for j, bi in enumerate(c.bidirectional()) if bi]
    if len(free) > max_bidirectional:
        raise SizeLimitError("bi-directional edges", max_bidirectional, len(free))

    orientations: list[nx.DiGraph] = []
    for choice in itertools.product((False, True), repeat=len(free)):
        mask = [False] * g.m
        for j, flip in zip(free, choice, strict=True):
            mask[j] = flip
        oriented = nx.DiGraph()
        oriented.add_nodes_from(range(g.n))
        oriented.add_edges_from(g.reversed_edges(mask).edges)
        orientations.append(oriented)

    for source, target in itertools.permutations(range(g.n), 2):
        if not any(nx.has_path(o, source, target) for o in orientations):
            return False
    return True
