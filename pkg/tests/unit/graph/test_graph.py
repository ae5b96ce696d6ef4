"""Unit tests for flownet.graph: graph types, connectivity and cycle covers."""

import itertools

import numpy as np
import pytest

from flownet.exceptions import ConstraintError, DimensionError, GraphError, PredicateError, SizeLimitError
from flownet.graph import (
    CycleCover,
    DirectedGraph,
    FlowConstraints,
    brute_force_scc_wrt_constraints,
    canonicalize_orientation,
    enumerate_simple_cycles,
    greedy_cycle_cover,
    incidence_matrix,
    is_balanced,
    is_strongly_connected,
    is_weakly_connected,
    iter_minimal_cycle_covers,
    make_cover,
    minimal_cycle_cover,
    non_overlapping_cycle_cover,
    strongly_connected_wrt_constraints,
    weak_components,
)
from flownet.scenario.presets import five_vertex_graph

# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


@pytest.fixture
def triangle() -> DirectedGraph:
    return DirectedGraph(n=3, edges=((0, 1), (1, 2), (2, 0)))


@pytest.fixture
def path() -> DirectedGraph:
    return DirectedGraph(n=3, edges=((0, 1), (1, 2)))


@pytest.fixture
def complete3() -> DirectedGraph:
    """Complete digraph on three vertices (every ordered pair once)."""
    return DirectedGraph(n=3, edges=tuple((a, b) for a, b in itertools.permutations(range(3), 2)))


def _cover_is_valid(g: DirectedGraph, cover: CycleCover) -> bool:
    """Every cycle is a closed simple walk and every edge is covered."""
    covered = set()
    for cycle in cover.cycles:
        for a, b in itertools.pairwise(list(cycle) + [cycle[0]]):
            if g.edges[a][1] != g.edges[b][0]:
                return False
        tails = [g.edges[e][0] for e in cycle]
        if len(set(tails)) != len(tails):
            return False
        covered.update(cycle)
    return covered == set(range(g.m))


# ---------------------------------------------------------------------------
# Graph and constraint types
# ---------------------------------------------------------------------------


class TestDirectedGraph:
    """Construction and validation of DirectedGraph."""

    def test_edge_count(self, triangle: DirectedGraph) -> None:
        assert triangle.m == 3

    def test_self_loop_rejected(self) -> None:
        with pytest.raises(GraphError, match="self-loop"):
            DirectedGraph(n=2, edges=((1, 1),))

    def test_vertex_out_of_range_rejected(self) -> None:
        with pytest.raises(GraphError, match="outside"):
            DirectedGraph(n=2, edges=((0, 2),))

    def test_zero_vertices_rejected(self) -> None:
        with pytest.raises(GraphError):
            DirectedGraph(n=0)

    def test_from_edges_accepts_lists(self) -> None:
        g = DirectedGraph.from_edges(3, [[0, 1], [1, 2]])
        assert g.edges == ((0, 1), (1, 2))

    def test_from_edges_rejects_triples(self) -> None:
        with pytest.raises(GraphError, match="pair"):
            DirectedGraph.from_edges(3, [[0, 1, 2]])

    def test_parallel_edges_allowed(self) -> None:
        assert DirectedGraph(n=2, edges=((0, 1), (0, 1))).m == 2

    def test_reversed_edges(self, triangle: DirectedGraph) -> None:
        flipped = triangle.reversed_edges([False, True, False])
        assert flipped.edges == ((0, 1), (2, 1), (2, 0))

    def test_reversed_edges_mask_length(self, triangle: DirectedGraph) -> None:
        with pytest.raises(DimensionError):
            triangle.reversed_edges([True])

    def test_to_dict(self, path: DirectedGraph) -> None:
        assert path.to_dict() == {"n": 3, "edges": [[0, 1], [1, 2]]}


class TestFlowConstraints:
    """Interval validation and direction flags."""

    def test_uniform(self) -> None:
        c = FlowConstraints.uniform(3, 0.0, 1.0)
        assert c.lower == (0.0, 0.0, 0.0)
        assert c.upper == (1.0, 1.0, 1.0)

    def test_interval_must_contain_zero(self) -> None:
        with pytest.raises(ConstraintError) as info:
            FlowConstraints(lower=(0.5,), upper=(1.0,))
        assert info.value.edge == 0

    def test_degenerate_interval_rejected(self) -> None:
        with pytest.raises(ConstraintError):
            FlowConstraints(lower=(0.0,), upper=(0.0,))

    def test_length_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            FlowConstraints(lower=(0.0, 0.0), upper=(1.0,))

    def test_direction_flags(self) -> None:
        c = FlowConstraints(lower=(0.0, -1.0, -2.0), upper=(1.0, 1.0, 0.0))
        assert c.unidirectional() == (True, False, True)
        assert c.bidirectional() == (False, True, False)
        assert not c.is_canonical

    def test_arrays(self) -> None:
        c = FlowConstraints(lower=(-1.0, 0.0), upper=(2.0, 3.0))
        np.testing.assert_array_equal(c.lower_array, [-1.0, 0.0])
        np.testing.assert_array_equal(c.upper_array, [2.0, 3.0])


# ---------------------------------------------------------------------------
# Incidence and connectivity
# ---------------------------------------------------------------------------


class TestIncidence:
    """incidence_matrix puts +1 at heads and -1 at tails."""

    def test_triangle(self, triangle: DirectedGraph) -> None:
        expected = np.array([[-1, 0, 1], [1, -1, 0], [0, 1, -1]])
        np.testing.assert_array_equal(incidence_matrix(triangle), expected)

    def test_columns_sum_to_zero(self) -> None:
        b = incidence_matrix(five_vertex_graph())
        assert not np.any(b.sum(axis=0))

    def test_rank_matches_components(self) -> None:
        g = DirectedGraph(n=5, edges=((0, 1), (1, 2), (3, 4)))
        assert np.linalg.matrix_rank(incidence_matrix(g)) == g.n - len(weak_components(g))

    def test_no_edges(self) -> None:
        assert incidence_matrix(DirectedGraph(n=2)).shape == (2, 0)


class TestConnectivity:
    """Weak and strong connectivity and balance."""

    def test_path_is_weak_not_strong(self, path: DirectedGraph) -> None:
        assert is_weakly_connected(path)
        assert not is_strongly_connected(path)

    def test_triangle_strong_and_balanced(self, triangle: DirectedGraph) -> None:
        assert is_strongly_connected(triangle)
        assert is_balanced(triangle)

    def test_example_graph_unbalanced(self) -> None:
        g = five_vertex_graph()
        assert is_strongly_connected(g)
        assert not is_balanced(g)

    def test_weak_components_ordered(self) -> None:
        g = DirectedGraph(n=5, edges=((3, 4), (2, 0)))
        assert weak_components(g) == [[0, 2], [1], [3, 4]]
        assert not is_weakly_connected(g)

    def test_single_vertex(self) -> None:
        g = DirectedGraph(n=1)
        assert is_weakly_connected(g)
        assert is_strongly_connected(g)
        assert is_balanced(g)


class TestCanonicalizeOrientation:
    """Edges whose interval only admits non-positive flow are reversed."""

    def test_flips_negative_edges(self, path: DirectedGraph) -> None:
        c = FlowConstraints(lower=(-2.0, -1.0), upper=(0.0, 1.0))
        g, c2, flips = canonicalize_orientation(path, c)
        assert flips == (True, False)
        assert g.edges == ((1, 0), (1, 2))
        assert c2.lower == (0.0, -1.0)
        assert c2.upper == (2.0, 1.0)
        assert c2.is_canonical

    def test_idempotent(self, path: DirectedGraph) -> None:
        c = FlowConstraints(lower=(-2.0, 0.0), upper=(0.0, 1.0))
        g, c2, _ = canonicalize_orientation(path, c)
        g3, c3, flips = canonicalize_orientation(g, c2)
        assert not any(flips)
        assert (g3, c3) == (g, c2)

    def test_dimension_mismatch(self, path: DirectedGraph) -> None:
        with pytest.raises(DimensionError):
            canonicalize_orientation(path, FlowConstraints.uniform(3, 0.0, 1.0))


class TestStrongConnectivityWithConstraints:
    """Reachability with bi-directional edges usable both ways."""

    def test_single_unidirectional_edge(self) -> None:
        g = DirectedGraph(n=2, edges=((0, 1),))
        assert not strongly_connected_wrt_constraints(g, FlowConstraints.uniform(1, 0.0, 1.0))

    def test_single_bidirectional_edge(self) -> None:
        g = DirectedGraph(n=2, edges=((0, 1),))
        assert strongly_connected_wrt_constraints(g, FlowConstraints.uniform(1, -1.0, 1.0))

    def test_reversed_unidirectional_edges_close_a_cycle(self) -> None:
        g = DirectedGraph(n=2, edges=((0, 1), (0, 1)))
        c = FlowConstraints(lower=(0.0, -1.0), upper=(1.0, 0.0))
        assert strongly_connected_wrt_constraints(g, c)

    def test_path_with_mixed_edges(self, path: DirectedGraph) -> None:
        c = FlowConstraints(lower=(-1.0, 0.0), upper=(1.0, 1.0))
        assert not strongly_connected_wrt_constraints(path, c)

    @pytest.mark.parametrize(
        "lower, upper",
        [
            ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
            ((-1.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
            ((-1.0, -1.0, 0.0), (0.0, 1.0, 1.0)),
            ((-1.0, -1.0, -1.0), (0.0, 0.0, 0.0)),
        ],
    )
    def test_agrees_with_brute_force(self, triangle: DirectedGraph, lower, upper) -> None:
        c = FlowConstraints(lower=lower, upper=upper)
        assert strongly_connected_wrt_constraints(triangle, c) == brute_force_scc_wrt_constraints(triangle, c)

    def test_brute_force_size_limit(self) -> None:
        g = DirectedGraph(n=2, edges=((0, 1),) * 4)
        with pytest.raises(SizeLimitError):
            brute_force_scc_wrt_constraints(g, FlowConstraints.uniform(4, -1.0, 1.0), max_bidirectional=3)


# ---------------------------------------------------------------------------
# Cycle covers
# ---------------------------------------------------------------------------


class TestNonOverlappingCover:
    """Edge-disjoint decompositions of balanced graphs."""

    def test_triangle_is_one_cycle(self, triangle: DirectedGraph) -> None:
        cover = non_overlapping_cycle_cover(triangle)
        assert cover is not None
        assert cover.cycles == ((0, 1, 2),)
        assert cover.non_overlapping

    def test_unbalanced_returns_none(self) -> None:
        assert non_overlapping_cycle_cover(five_vertex_graph()) is None

    def test_complete_digraph_decomposes(self, complete3: DirectedGraph) -> None:
        cover = non_overlapping_cycle_cover(complete3)
        assert cover is not None
        assert cover.multiplicity == (1,) * complete3.m
        assert _cover_is_valid(complete3, cover)

    def test_figure_eight(self) -> None:
        g = DirectedGraph(n=3, edges=((0, 1), (1, 0), (0, 2), (2, 0)))
        cover = non_overlapping_cycle_cover(g)
        assert cover is not None
        assert cover.k == 2
        assert _cover_is_valid(g, cover)

    def test_empty_graph(self) -> None:
        cover = non_overlapping_cycle_cover(DirectedGraph(n=3))
        assert cover is not None
        assert cover.k == 0


class TestSimpleCycles:
    """enumerate_simple_cycles lists edge-index cycles."""

    def test_complete_digraph(self, complete3: DirectedGraph) -> None:
        cycles = enumerate_simple_cycles(complete3)
        assert len(cycles) == 5
        assert sum(1 for c in cycles if len(c) == 2) == 3

    def test_parallel_edges_expanded(self) -> None:
        g = DirectedGraph(n=2, edges=((0, 1), (0, 1), (1, 0)))
        assert enumerate_simple_cycles(g) == [(0, 2), (1, 2)]

    def test_example_graph(self) -> None:
        cycles = enumerate_simple_cycles(five_vertex_graph())
        assert len(cycles) == 3
        assert all(2 in c for c in cycles)


class TestMinimalCover:
    """Exact minimum covers and the greedy fallback."""

    def test_example_graph_multiplicities(self) -> None:
        cover = minimal_cycle_cover(five_vertex_graph())
        assert cover.k == 3
        assert cover.multiplicity == (1, 2, 3, 1, 1, 1, 1)
        assert cover.t_max == 3
        assert cover.minimal
        assert not cover.non_overlapping

    def test_cover_nullifies_incidence(self) -> None:
        g = five_vertex_graph()
        cover = minimal_cycle_cover(g)
        assert not np.any(incidence_matrix(g) @ cover.multiplicity_array())

    def test_complete_digraph_needs_two(self, complete3: DirectedGraph) -> None:
        cover = minimal_cycle_cover(complete3)
        assert cover.k == 2
        assert _cover_is_valid(complete3, cover)

    def test_all_minimal_covers_enumerated(self) -> None:
        g = DirectedGraph(n=2, edges=((0, 1), (0, 1), (1, 0), (1, 0)))
        covers = list(iter_minimal_cycle_covers(g))
        assert all(c.k == 2 for c in covers)
        assert len(covers) == 2
        assert len({c.cycles for c in covers}) == 2

    def test_not_strongly_connected(self, path: DirectedGraph) -> None:
        with pytest.raises(PredicateError):
            minimal_cycle_cover(path)

    def test_exact_size_limit(self) -> None:
        with pytest.raises(SizeLimitError):
            next(iter_minimal_cycle_covers(five_vertex_graph(), max_edges=5))

    def test_greedy_fallback_above_limit(self) -> None:
        g = five_vertex_graph()
        cover = minimal_cycle_cover(g, max_edges=5)
        assert not cover.minimal
        assert _cover_is_valid(g, cover)

    def test_greedy_cover_valid(self, complete3: DirectedGraph) -> None:
        cover = greedy_cycle_cover(complete3)
        assert _cover_is_valid(complete3, cover)
        assert cover.k >= 2

    def test_single_vertex_empty_cover(self) -> None:
        cover = minimal_cycle_cover(DirectedGraph(n=1))
        assert cover.k == 0
        assert cover.t_max == 0


class TestCycleCoverType:
    """make_cover derives multiplicities and the overlap flag."""

    def test_make_cover(self) -> None:
        cover = make_cover(3, [[0, 1], [1, 2]])
        assert cover.multiplicity == (1, 2, 1)
        assert not cover.non_overlapping
        np.testing.assert_array_equal(cover.indicator(1), [0, 1, 1])

    def test_summary(self) -> None:
        summary = make_cover(2, [[0, 1]], minimal=True).summary()
        assert summary == {"k": 1, "T": [1, 1], "cycles": [[0, 1]], "non_overlapping": True, "minimal": True}
