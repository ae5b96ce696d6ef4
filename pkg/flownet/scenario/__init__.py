"""
flownet scenarios.

Scenario type, JSON loading and saving, presets, the non-consensus
counterexample builder and graph generators.
"""

from flownet.scenario.counterexample import build_counterexample
from flownet.scenario.generators import (
    enumerate_digraphs,
    random_balanced_strongly_connected_graph,
    random_weakly_connected_graph,
    strongly_connected_digraphs,
)
from flownet.scenario.parser import ScenarioParser, dump_scenario, load_graph, load_scenario, save_scenario
from flownet.scenario.presets import PRESETS, five_vertex_example, five_vertex_graph, get_preset
from flownet.scenario.schema import Scenario

__all__ = [
    "PRESETS",
    "Scenario",
    "ScenarioParser",
    "build_counterexample",
    "dump_scenario",
    "enumerate_digraphs",
    "five_vertex_example",
    "five_vertex_graph",
    "get_preset",
    "load_graph",
    "load_scenario",
    "random_balanced_strongly_connected_graph",
    "random_weakly_connected_graph",
    "save_scenario",
    "strongly_connected_digraphs",
]
