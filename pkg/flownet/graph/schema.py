"""
Graph data structures for flownet.

Immutable value types: a directed graph given by its edge list, per-edge flow
intervals, and cycle covers. Orientation changes and covers always produce new
values; nothing here is mutated after construction.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from flownet.exceptions import ConstraintError, DimensionError, GraphError


@dataclass(frozen=True)
class DirectedGraph:
    """Directed graph on vertices ``0..n-1`` with an ordered edge list.

    Edge ``j`` runs from ``edges[j][0]`` (tail) to ``edges[j][1]`` (head).
    Parallel edges are allowed; self-loops are not.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n <= 0:
            raise GraphError(f"Vertex count must be a positive integer, got {self.n!r}")
        normalized = tuple((int(t), int(h)) for t, h in self.edges)
        object.__setattr__(self, "edges", normalized)
        for j, (tail, head) in enumerate(normalized):
            if not (0 <= tail < self.n and 0 <= head < self.n):
                raise GraphError(f"Edge {j} ({tail}->{head}) references a vertex outside [0, {self.n})")
            if tail == head:
                raise GraphError(f"Edge {j} is a self-loop at vertex {tail}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> DirectedGraph:
        """Build a graph from any iterable of ``(tail, head)`` pairs."""
        pairs = []
        for pair in edges:
            if len(pair) != 2:
                raise GraphError(f"Edge {list(pair)!r} must be a [tail, head] pair")
            pairs.append((pair[0], pair[1]))
        return cls(n=n, edges=tuple(pairs))

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def tails(self) -> np.ndarray:
        return np.array([t for t, _ in self.edges], dtype=np.int64)

    def heads(self) -> np.ndarray:
        return np.array([h for _, h in self.edges], dtype=np.int64)

    def reversed_edges(self, mask: Sequence[bool]) -> DirectedGraph:
        """Return a copy with every edge ``j`` where ``mask[j]`` reversed."""
        if len(mask) != self.m:
            raise DimensionError("flip mask", (self.m,), (len(mask),))
        flipped = tuple((h, t) if flip else (t, h) for (t, h), flip in zip(self.edges, mask, strict=True))
        return DirectedGraph(n=self.n, edges=flipped)

    def to_dict(self) -> dict:
        """Serialize to the scenario-file graph fragment."""
        return {"n": self.n, "edges": [[t, h] for t, h in self.edges]}


@dataclass(frozen=True)
class FlowConstraints:
    """Closed per-edge flow intervals ``[lower_i, upper_i]``.

    Every interval must contain zero and be non-degenerate. An edge is
    uni-directional when ``lower_i == 0`` and bi-directional when
    ``lower_i < 0 < upper_i``.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper):
            raise DimensionError("constraint bounds", (len(lower),), (len(upper),))
        for i, (lo, hi) in enumerate(zip(lower, upper, strict=True)):
            if not (lo <= 0.0 <= hi and lo < hi):
                raise ConstraintError(i, lo, hi)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, m: int, lower: float, upper: float) -> FlowConstraints:
        return cls(lower=(lower,) * m, upper=(upper,) * m)

    @property
    def m(self) -> int:
        return len(self.lower)

    @property
    def lower_array(self) -> np.ndarray:
        return np.array(self.lower, dtype=float)

    @property
    def upper_array(self) -> np.ndarray:
        return np.array(self.upper, dtype=float)

    @property
    def is_canonical(self) -> bool:
        """True when every edge can carry positive flow along its orientation."""
        return all(hi > 0.0 for hi in self.upper)

    def unidirectional(self) -> tuple[bool, ...]:
        """Per-edge flag: flow restricted to one sign."""
        return tuple(lo == 0.0 or hi == 0.0 for lo, hi in zip(self.lower, self.upper, strict=True))

    def bidirectional(self) -> tuple[bool, ...]:
        return tuple(lo < 0.0 < hi for lo, hi in zip(self.lower, self.upper, strict=True))

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}


@dataclass(frozen=True)
class CycleCover:
    """A set of directed cycles covering the edge set.

    ``cycles`` lists each cycle as edge indices in traversal order;
    ``multiplicity[i]`` counts the cycles containing edge ``i``.
    ``minimal`` is only set by the exact solver.
    """

    cycles: tuple[tuple[int, ...], ...]
    multiplicity: tuple[int, ...]
    non_overlapping: bool
    minimal: bool = False

    @property
    def k(self) -> int:
        """Number of cycles in the cover."""
        return len(self.cycles)

    @property
    def t_max(self) -> int:
        """Largest edge multiplicity (0 for an empty cover)."""
        return max(self.multiplicity, default=0)

    def multiplicity_array(self) -> np.ndarray:
        return np.array(self.multiplicity, dtype=np.int64)

    def indicator(self, index: int) -> np.ndarray:
        """Edge-space indicator vector of cycle ``index``."""
        vec = np.zeros(len(self.multiplicity), dtype=np.int64)
        vec[list(self.cycles[index])] = 1
        return vec

    def summary(self) -> dict:
        return {
            "k": self.k,
            "T": list(self.multiplicity),
            "cycles": [list(c) for c in self.cycles],
            "non_overlapping": self.non_overlapping,
            "minimal": self.minimal,
        }


def make_cover(m: int, cycles: Sequence[Sequence[int]], minimal: bool = False) -> CycleCover:
    """Assemble a CycleCover, deriving multiplicities and the overlap flag."""
    counts = [0] * m
    for cycle in cycles:
        for edge in cycle:
            counts[edge] += 1
    non_overlapping = all(c == 1 for c in counts)
    return CycleCover(
        cycles=tuple(tuple(int(e) for e in c) for c in cycles),
        multiplicity=tuple(counts),
        non_overlapping=non_overlapping,
        minimal=minimal,
    )
