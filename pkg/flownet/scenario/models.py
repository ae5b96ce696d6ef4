"""
Pydantic wire models for scenario documents.

These models check the document shape (keys, types, required fields); the
domain constructors in ``flownet.scenario.parser`` check the semantics.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class _WireModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GraphModel(_WireModel):
    n: int = Field(gt=0)
    edges: list[tuple[int, int]]


class ConstraintsModel(_WireModel):
    lower: list[float]
    upper: list[float]


class HamiltonianModel(_WireModel):
    kind: Literal["quadratic", "weighted"]
    weights: list[float] | None = None


class ControllerModel(_WireModel):
    kind: Literal["P", "PI", "PI_sat"]
    gains: list[float] | None = None


class DisturbanceWireModel(_WireModel):
    E: list[list[int]]
    d: list[float]


class IntegratorModel(_WireModel):
    step: float = Field(gt=0)
    horizon: float = Field(ge=0)
    stride: int = Field(ge=1)


class TolerancesModel(_WireModel):
    consensus: float | None = Field(default=None, gt=0)
    steady_rate: float | None = Field(default=None, gt=0)


class ScenarioModel(_WireModel):
    """Top-level scenario document.

    ``constraints`` and ``disturbance`` are required keys that may be null.
    """

    name: str
    notes: str | None = None
    graph: GraphModel
    constraints: ConstraintsModel | None
    hamiltonian: HamiltonianModel
    controller: ControllerModel
    disturbance: DisturbanceWireModel | None
    x0: list[float]
    xc0: list[float]
    x_c_bar: list[float] | None = None
    integrator: IntegratorModel
    tolerances: TolerancesModel | None = None
    metadata: dict[str, Any] = Field(default_factory=dict)
