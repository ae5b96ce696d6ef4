"""
Cycle covers of directed graphs.

Three constructions:

- ``non_overlapping_cycle_cover``: decomposition of a balanced graph into
  edge-disjoint simple cycles by walking unused out-edges (lowest index first).
- ``iter_minimal_cycle_covers`` / ``minimal_cycle_cover``: exact minimum
  number of simple cycles covering every edge, by branch and bound over the
  enumerated simple cycles (small graphs only).
- ``greedy_cycle_cover``: shortest-return-path cover for larger graphs,
  flagged ``minimal=False``.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator

import networkx as nx

from flownet.exceptions import PredicateError, SizeLimitError
from flownet.graph.connectivity import is_balanced, is_strongly_connected, to_networkx
from flownet.graph.schema import CycleCover, DirectedGraph, make_cover

logger = logging.getLogger(__name__)

# The exact solver enumerates simple cycles; beyond this many edges it is refused
MAX_EXACT_EDGES = 16


def _canonical_rotation(cycle: list[int]) -> tuple[int, ...]:
    """Rotate a cycle so that its smallest edge index comes first."""
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


def non_overlapping_cycle_cover(g: DirectedGraph) -> CycleCover | None:
    """Split the edge set into edge-disjoint simple cycles.

    Returns ``None`` when the graph is unbalanced; a balanced graph always
    decomposes. Ties are broken by lowest edge index, so the result is
    deterministic.
    """
    if not is_balanced(g):
        return None

    out_edges: list[list[int]] = [[] for _ in range(g.n)]
    for j, (tail, _) in enumerate(g.edges):
        out_edges[tail].append(j)
    cursor = [0] * g.n
    used = [False] * g.m

    def next_unused(vertex: int) -> int | None:
        edges = out_edges[vertex]
        while cursor[vertex] < len(edges) and used[edges[cursor[vertex]]]:
            cursor[vertex] += 1
        return edges[cursor[vertex]] if cursor[vertex] < len(edges) else None

    def walk(vertex: int) -> list[tuple[int, ...]]:
        found: list[tuple[int, ...]] = []
        path_vertices = [vertex]
        path_edges: list[int] = []
        position = {vertex: 0}
        while True:
            edge = next_unused(vertex)
            if edge is None:
                # balanced graphs never strand a walk away from its start
                break
            used[edge] = True
            path_edges.append(edge)
            vertex = g.edges[edge][1]
            if vertex in position:
                cut = position[vertex]
                found.append(_canonical_rotation(path_edges[cut:]))
                for dropped in path_vertices[cut + 1 :]:
                    del position[dropped]
                path_edges = path_edges[:cut]
                path_vertices = path_vertices[: cut + 1]
                if not path_edges:
                    break
            else:
                position[vertex] = len(path_vertices)
                path_vertices.append(vertex)
        return found

    cycles: list[tuple[int, ...]] = []
    for start in range(g.m):
        while not used[start]:
            cycles.extend(walk(g.edges[start][0]))

    logger.debug("Non-overlapping cover with %d cycle(s)", len(cycles))
    return make_cover(g.m, cycles)


def enumerate_simple_cycles(g: DirectedGraph) -> list[tuple[int, ...]]:
    """All simple directed cycles as edge-index tuples, parallel edges expanded."""
    parallel: dict[tuple[int, int], list[int]] = {}
    for j, pair in enumerate(g.edges):
        parallel.setdefault(pair, []).append(j)
    simple = nx.DiGraph()
    simple.add_nodes_from(range(g.n))
    simple.add_edges_from(parallel)

    cycles: set[tuple[int, ...]] = set()
    for nodes in nx.simple_cycles(simple):
        hops = [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]
        for choice in itertools.product(*(parallel[hop] for hop in hops)):
            cycles.add(_canonical_rotation(list(choice)))
    return sorted(cycles, key=lambda c: (len(c), sorted(c), c))


def iter_minimal_cycle_covers(
    g: DirectedGraph,
    max_edges: int = MAX_EXACT_EDGES,
) -> Iterator[CycleCover]:
    """Yield every minimum-cardinality cover by simple cycles.

    Raises:
        PredicateError: If the graph is not strongly connected.
        SizeLimitError: If the graph has more than ``max_edges`` edges.
    """
    if not is_strongly_connected(g):
        raise PredicateError("strongly connected")
    if g.m > max_edges:
        raise SizeLimitError("edges for the exact cycle cover", max_edges, g.m)
    if g.m == 0:
        yield make_cover(0, [], minimal=True)
        return

    cycles = enumerate_simple_cycles(g)
    masks = [sum(1 << e for e in cycle) for cycle in cycles]
    covering: list[list[int]] = [[i for i, mask in enumerate(masks) if mask >> e & 1] for e in range(g.m)]
    longest = max(len(c) for c in cycles)
    full = (1 << g.m) - 1

    def lower_bound(uncovered: int) -> int:
        return -(-uncovered.bit_count() // longest)

    def branch_edge(uncovered: int) -> int:
        candidates = [e for e in range(g.m) if uncovered >> e & 1]
        return min(candidates, key=lambda e: (len(covering[e]), e))

    best = [len(greedy_cycle_cover(g).cycles)]

    def search_optimum(uncovered: int, depth: int) -> None:
        if uncovered == 0:
            best[0] = min(best[0], depth)
            return
        if depth + lower_bound(uncovered) >= best[0]:
            return
        for i in covering[branch_edge(uncovered)]:
            search_optimum(uncovered & ~masks[i], depth + 1)

    search_optimum(full, 0)
    k = best[0]
    logger.debug("Exact cover: %d simple cycles, optimum k=%d", len(cycles), k)

    seen: set[frozenset[int]] = set()

    def search_all(uncovered: int, chosen: list[int]) -> Iterator[frozenset[int]]:
        if uncovered == 0:
            key = frozenset(chosen)
            if key not in seen:
                seen.add(key)
                yield key
            return
        if len(chosen) + lower_bound(uncovered) > k:
            return
        for i in covering[branch_edge(uncovered)]:
            chosen.append(i)
            yield from search_all(uncovered & ~masks[i], chosen)
            chosen.pop()

    for selection in search_all(full, []):
        yield make_cover(g.m, [cycles[i] for i in sorted(selection)], minimal=True)


def minimal_cycle_cover(g: DirectedGraph, max_edges: int = MAX_EXACT_EDGES) -> CycleCover:
    """Smallest cover by simple cycles; greedy (``minimal=False``) above ``max_edges``.

    Raises:
        PredicateError: If the graph is not strongly connected.
    """
    if not is_strongly_connected(g):
        raise PredicateError("strongly connected")
    if g.m > max_edges:
        logger.warning(
            "Graph has %d edges (> %d); falling back to an uncertified greedy cover",
            g.m,
            max_edges,
        )
        return greedy_cycle_cover(g)
    return next(iter_minimal_cycle_covers(g, max_edges=max_edges))


def greedy_cycle_cover(g: DirectedGraph) -> CycleCover:
    """Cover each still-uncovered edge by the edge plus a shortest return path.

    Raises:
        PredicateError: If the graph is not strongly connected.
    """
    if not is_strongly_connected(g):
        raise PredicateError("strongly connected")
    graph = to_networkx(g)
    covered = [False] * g.m
    cycles: list[tuple[int, ...]] = []
    for j, (tail, head) in enumerate(g.edges):
        if covered[j]:
            continue
        route = nx.shortest_path(graph, head, tail)
        cycle = [j]
        for u, v in itertools.pairwise(route):
            cycle.append(min(graph[u][v]))
        for edge in cycle:
            covered[edge] = True
        cycles.append(_canonical_rotation(cycle))
    return make_cover(g.m, cycles, minimal=False)
