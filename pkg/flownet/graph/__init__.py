"""
flownet graph layer.

Directed graphs, flow constraints, incidence matrices, connectivity predicates
and cycle covers.
"""

from flownet.graph.connectivity import (
    brute_force_scc_wrt_constraints,
    canonicalize_orientation,
    incidence_matrix,
    is_balanced,
    is_strongly_connected,
    is_weakly_connected,
    strongly_connected_wrt_constraints,
    weak_components,
)
from flownet.graph.cycles import (
    enumerate_simple_cycles,
    greedy_cycle_cover,
    iter_minimal_cycle_covers,
    minimal_cycle_cover,
    non_overlapping_cycle_cover,
)
from flownet.graph.schema import CycleCover, DirectedGraph, FlowConstraints, make_cover

__all__ = [
    "CycleCover",
    "DirectedGraph",
    "FlowConstraints",
    "brute_force_scc_wrt_constraints",
    "canonicalize_orientation",
    "enumerate_simple_cycles",
    "greedy_cycle_cover",
    "incidence_matrix",
    "is_balanced",
    "is_strongly_connected",
    "is_weakly_connected",
    "iter_minimal_cycle_covers",
    "make_cover",
    "minimal_cycle_cover",
    "non_overlapping_cycle_cover",
    "strongly_connected_wrt_constraints",
    "weak_components",
]
