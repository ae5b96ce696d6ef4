"""
Scenario: the unit of simulation and analysis.

A scenario bundles a graph, a storage function, a controller (carrying the
flow constraints for the saturated loop), an optional constant injection,
initial data and integrator settings.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from flownet.config.schema import ToleranceConfig
from flownet.dynamics.closed_loop import ClosedLoop
from flownet.dynamics.controllers import ControllerKind, ControllerSpec, DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.exceptions import FlownetError, ScenarioError
from flownet.graph.connectivity import canonicalize_orientation
from flownet.graph.schema import DirectedGraph, FlowConstraints
from flownet.sim.schema import IntegratorParams


@dataclass(frozen=True)
class Scenario:
    """Complete description of one closed-loop run."""

    name: str
    graph: DirectedGraph
    hamiltonian: Hamiltonian
    controller: ControllerSpec
    x0: tuple[float, ...]
    xc0: tuple[float, ...]
    disturbance: DisturbanceModel | None = None
    integrator: IntegratorParams = field(default_factory=IntegratorParams)
    x_c_bar: tuple[float, ...] | None = None
    tolerances: ToleranceConfig | None = None
    notes: str | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n, m = self.graph.n, self.graph.m
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        object.__setattr__(self, "xc0", tuple(float(v) for v in self.xc0))
        if self.x_c_bar is not None:
            object.__setattr__(self, "x_c_bar", tuple(float(v) for v in self.x_c_bar))

        if len(self.x0) != n:
            raise ScenarioError("x0", f"expected {n} entries, got {len(self.x0)}")
        if len(self.xc0) != m:
            raise ScenarioError("xc0", f"expected {m} entries, got {len(self.xc0)}")
        if self.x_c_bar is not None and len(self.x_c_bar) != m:
            raise ScenarioError("x_c_bar", f"expected {m} entries, got {len(self.x_c_bar)}")
        if self.disturbance is not None and self.disturbance.n != n:
            raise ScenarioError("disturbance.E", f"expected {n} rows, got {self.disturbance.n}")
        if self.hamiltonian.weights is not None and len(self.hamiltonian.weights) != n:
            raise ScenarioError(
                "hamiltonian.weights", f"expected {n} entries, got {len(self.hamiltonian.weights)}"
            )
        if self.controller.gains is not None and len(self.controller.gains) != m:
            raise ScenarioError("controller.gains", f"expected {m} entries, got {len(self.controller.gains)}")
        if self.constraints is not None and self.constraints.m != m:
            raise ScenarioError("constraints", f"expected {m} intervals, got {self.constraints.m}")
        for label, values in (("x0", self.x0), ("xc0", self.xc0), ("x_c_bar", self.x_c_bar or ())):
            if not all(np.isfinite(values)):
                raise ScenarioError(label, "entries must be finite")

    # ------------------------------------------------------------------
    # Derived views
    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def constraints(self) -> FlowConstraints | None:
        return self.controller.constraints

    @property
    def is_disturbed(self) -> bool:
        return self.disturbance is not None and not self.disturbance.is_zero

    @cached_property
    def _loop(self) -> ClosedLoop:
        return ClosedLoop.build(self.graph, self.hamiltonian, self.controller, self.disturbance)

    def closed_loop(self) -> ClosedLoop:
        """The bound right-hand side of this scenario (built once)."""
        return self._loop

    def with_updates(self, **changes: Any) -> Scenario:
        return dataclasses.replace(self, **changes)

    def canonicalized(self) -> Scenario:
        """Reverse edges whose interval only admits non-positive flow.

        Controller states change sign on reversed edges, which leaves the
        vertex trajectory unchanged.
        """
        if self.constraints is None or self.constraints.is_canonical:
            return self
        graph, constraints, flips = canonicalize_orientation(self.graph, self.constraints)

        def flip(values: tuple[float, ...] | None) -> tuple[float, ...] | None:
            if values is None:
                return None
            return tuple(-v if f else v for v, f in zip(values, flips, strict=True))

        metadata = dict(self.metadata)
        metadata["reversed_edges"] = [j for j, f in enumerate(flips) if f]
        return dataclasses.replace(
            self,
            graph=graph,
            controller=ControllerSpec.saturated_pi(constraints),
            xc0=flip(self.xc0),
            x_c_bar=flip(self.x_c_bar),
            metadata=metadata,
        )

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        """Wire form with a fixed key order (see ``flownet.scenario.parser``)."""
        data: dict[str, Any] = {"name": self.name}
        if self.notes is not None:
            data["notes"] = self.notes
        data["graph"] = self.graph.to_dict()
        data["constraints"] = None if self.constraints is None else self.constraints.to_dict()
        data["hamiltonian"] = self.hamiltonian.to_dict()
        data["controller"] = self.controller.to_dict()
        data["disturbance"] = None if self.disturbance is None else self.disturbance.to_dict()
        data["x0"] = list(self.x0)
        data["xc0"] = list(self.xc0)
        if self.x_c_bar is not None:
            data["x_c_bar"] = list(self.x_c_bar)
        data["integrator"] = self.integrator.to_dict()
        if self.tolerances is not None:
            data["tolerances"] = {
                "consensus": self.tolerances.consensus,
                "steady_rate": self.tolerances.steady_rate,
            }
        if self.metadata:
            data["metadata"] = self.metadata
        return data


def build_controller(kind: str, gains: list[float] | None, constraints: FlowConstraints | None) -> ControllerSpec:
    """Assemble a controller from its wire parts."""
    controller_kind = ControllerKind(kind)
    if controller_kind is ControllerKind.SATURATED_PI:
        if constraints is None:
            raise ScenarioError("constraints", "the PI_sat controller requires flow constraints")
        if gains is not None:
            raise ScenarioError("controller.gains", "the PI_sat controller has unit gain")
        return ControllerSpec.saturated_pi(constraints)
    if constraints is not None:
        raise ScenarioError("constraints", f"the {kind} controller takes no flow constraints")
    if gains is None:
        raise ScenarioError("controller.gains", f"the {kind} controller requires gains")
    try:
        return ControllerSpec(kind=controller_kind, gains=tuple(gains))
    except FlownetError as exc:
        raise ScenarioError("controller.gains", str(exc)) from exc
