"""
Graph generators for the verification suites.

Exhaustive enumeration of small simple digraphs up to isomorphism, plus
seeded random families: weakly connected graphs and balanced strongly
connected multigraphs.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator

import numpy as np

from flownet.graph.connectivity import is_strongly_connected
from flownet.graph.schema import DirectedGraph


def canonical_form(n: int, edges: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    """Lexicographically smallest sorted edge list over all vertex relabelings."""
    return min(
        tuple(sorted((perm[t], perm[h]) for t, h in edges))
        for perm in itertools.permutations(range(n))
    )


def enumerate_digraphs(max_n: int, max_m: int, min_n: int = 1) -> Iterator[DirectedGraph]:
    """Every simple digraph with ``min_n..max_n`` vertices and at most ``max_m`` edges, once per isomorphism class."""
    for n in range(min_n, max_n + 1):
        pairs = [(t, h) for t in range(n) for h in range(n) if t != h]
        seen: set[tuple[tuple[int, int], ...]] = set()
        for m in range(0, min(max_m, len(pairs)) + 1):
            for edges in itertools.combinations(pairs, m):
                key = canonical_form(n, edges)
                if key in seen:
                    continue
                seen.add(key)
                yield DirectedGraph(n=n, edges=key)


def strongly_connected_digraphs(max_n: int, max_m: int, min_n: int = 1) -> Iterator[DirectedGraph]:
    for g in enumerate_digraphs(max_n, max_m, min_n):
        if is_strongly_connected(g):
            yield g


def random_weakly_connected_graph(rng: np.random.Generator, n: int, m: int) -> DirectedGraph:
    """Random simple digraph on ``n`` vertices with ``m`` edges, connected as an undirected graph.

    A random spanning tree with random edge directions is extended by distinct
    random vertex pairs.
    """
    if not (n - 1 <= m <= n * (n - 1)):
        raise ValueError(f"A weakly connected simple digraph on {n} vertices needs {n - 1}..{n * (n - 1)} edges, got {m}")
    order = rng.permutation(n)
    edges: list[tuple[int, int]] = []
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(0, i)])
        edges.append((a, b) if rng.random() < 0.5 else (b, a))
    used = set(edges)
    free = [(t, h) for t in range(n) for h in range(n) if t != h and (t, h) not in used]
    extra = rng.choice(len(free), size=m - len(edges), replace=False) if m > len(edges) else []
    edges.extend(free[int(i)] for i in extra)
    return DirectedGraph(n=n, edges=tuple(edges))


def random_balanced_strongly_connected_graph(
    rng: np.random.Generator,
    n: int,
    cycles: int,
) -> DirectedGraph:
    """Union of a Hamiltonian cycle and ``cycles`` further random simple cycles.

    Every vertex gains one in- and one out-edge per cycle through it, so the
    result is balanced; the Hamiltonian cycle makes it strongly connected.
    Parallel edges may occur.
    """
    if n < 2:
        raise ValueError(f"Need at least 2 vertices, got {n}")
    edges: list[tuple[int, int]] = []

    def add_cycle(vertices: np.ndarray) -> None:
        for i in range(len(vertices)):
            edges.append((int(vertices[i]), int(vertices[(i + 1) % len(vertices)])))

    add_cycle(rng.permutation(n))
    for _ in range(cycles):
        length = int(rng.integers(2, n + 1))
        add_cycle(rng.permutation(n)[:length])
    return DirectedGraph(n=n, edges=tuple(edges))
