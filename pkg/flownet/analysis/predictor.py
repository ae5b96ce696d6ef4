"""
Convergence prediction from graph structure.

Maps a scenario to the structural condition under which its loop reaches
consensus for every initial state, evaluates that condition and reports a
verdict. Each evaluated condition is recorded as a check, in the same shape
as a quality-gate result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from flownet.analysis.matching import (
    PermissionSet,
    adjust_into_permission_set,
    is_matched,
    solve_matching,
)
from flownet.dynamics.controllers import ControllerKind
from flownet.graph.connectivity import (
    canonicalize_orientation,
    is_balanced,
    is_strongly_connected,
    is_weakly_connected,
    strongly_connected_wrt_constraints,
)

if TYPE_CHECKING:
    from flownet.scenario.schema import Scenario

logger = logging.getLogger(__name__)

# Condition families a verdict can come from
RULE_PROPORTIONAL = "proportional"
RULE_PI = "pi"
RULE_SATURATED_UNDISTURBED = "saturated-undisturbed"
RULE_SATURATED_BIDIRECTIONAL = "saturated-bidirectional"
RULE_SATURATED_UNIDIRECTIONAL = "saturated-unidirectional"
RULE_MATCHING = "matching"
RULE_OUT_OF_SCOPE = "out-of-scope"


@dataclass
class Verdict:
    """Predicted outcome; ``consensus_expected`` is ``None`` when no rule decides."""

    consensus_expected: bool | None
    rule: str
    reason: str
    checks: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "consensus_expected": self.consensus_expected,
            "rule": self.rule,
            "reason": self.reason,
            "checks": self.checks,
        }


def _check(checks: list[dict[str, Any]], name: str, passed: bool, value: Any = None) -> bool:
    checks.append({"name": name, "passed": bool(passed), "value": passed if value is None else value})
    return bool(passed)


def predict_convergence(scenario: Scenario) -> Verdict:
    """Predict whether the scenario's loop reaches consensus from any initial state."""
    g = scenario.graph
    dist = scenario.disturbance
    kind = scenario.controller.kind
    checks: list[dict[str, Any]] = []
    undisturbed = _check(checks, "disturbance_absent", dist is None or dist.is_zero)

    if kind is ControllerKind.PROPORTIONAL:
        if not undisturbed:
            return Verdict(False, RULE_PROPORTIONAL, "proportional feedback cannot absorb a constant injection", checks)
        if _check(checks, "weakly_connected", is_weakly_connected(g)):
            return Verdict(True, RULE_PROPORTIONAL, "weakly connected", checks)
        return Verdict(False, RULE_PROPORTIONAL, "not weakly connected", checks)

    if kind is ControllerKind.PI:
        matching = solve_matching(g, dist)
        if not _check(checks, "matching_feasible", matching.feasible, matching.residual):
            return Verdict(False, RULE_PI, "matching infeasible", checks)
        if _check(checks, "weakly_connected", is_weakly_connected(g)):
            return Verdict(True, RULE_PI, "weakly connected", checks)
        return Verdict(False, RULE_PI, "not weakly connected", checks)

    g, c, flips = canonicalize_orientation(g, scenario.controller.constraints)
    if undisturbed:
        if _check(checks, "strongly_connected_wrt_constraints", strongly_connected_wrt_constraints(g, c)):
            return Verdict(True, RULE_SATURATED_UNDISTURBED, "strongly connected with respect to the flow constraints", checks)
        return Verdict(False, RULE_SATURATED_UNDISTURBED, "not strongly connected with respect to the flow constraints", checks)

    matching = solve_matching(g, dist)
    if not _check(checks, "matching_feasible", matching.feasible, matching.residual):
        return Verdict(False, RULE_MATCHING, "matching infeasible", checks)

    uni = c.unidirectional()
    if any(uni) and not all(uni):
        logger.warning("Scenario %r mixes uni- and bi-directional edges under injection", scenario.name)
        return Verdict(None, RULE_OUT_OF_SCOPE, "mixed uni-/bi-directional constraints with injection", checks)

    pset = PermissionSet.from_constraints(c)
    x_c_bar = scenario.x_c_bar
    if x_c_bar is not None:
        x_c_bar = np.where(flips, -np.asarray(x_c_bar, dtype=float), x_c_bar)
    if x_c_bar is None or not pset.contains(x_c_bar) or not is_matched(g, dist, x_c_bar):
        x_c_bar = adjust_into_permission_set(g, dist, pset)
    if not _check(checks, "matched_state_in_permission_set", x_c_bar is not None):
        return Verdict(None, RULE_OUT_OF_SCOPE, "no matched controller state in the permission set", checks)

    if not any(uni):
        if _check(checks, "weakly_connected", is_weakly_connected(g)):
            return Verdict(True, RULE_SATURATED_BIDIRECTIONAL, "weakly connected", checks)
        return Verdict(False, RULE_SATURATED_BIDIRECTIONAL, "not weakly connected", checks)

    if not _check(checks, "strongly_connected", is_strongly_connected(g)):
        return Verdict(False, RULE_SATURATED_UNIDIRECTIONAL, "not strongly connected", checks)
    if not _check(checks, "balanced", is_balanced(g)):
        return Verdict(False, RULE_SATURATED_UNIDIRECTIONAL, "unbalanced", checks)
    return Verdict(True, RULE_SATURATED_UNIDIRECTIONAL, "strongly connected and balanced", checks)

