"""
ScenarioParser: reads and writes scenario JSON documents.

Shape errors come from the pydantic wire models; semantic errors (vertex
indices, interval signs, dimensions) from the domain constructors. Both are
reported as ``ScenarioError`` naming the offending field path.

Saved documents use a fixed key order and two-space indentation so that a
scenario serializes to the same bytes every time.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from flownet.config.schema import ToleranceConfig
from flownet.dynamics.controllers import DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.exceptions import FlownetError, ScenarioError
from flownet.graph.schema import DirectedGraph, FlowConstraints
from flownet.scenario.models import GraphModel, ScenarioModel
from flownet.scenario.schema import Scenario, build_controller
from flownet.sim.schema import IntegratorParams

logger = logging.getLogger(__name__)


@contextmanager
def _field(path: str) -> Iterator[None]:
    """Re-raise domain errors as ScenarioError attributed to ``path``."""
    try:
        yield
    except ScenarioError:
        raise
    except (FlownetError, ValueError) as exc:
        raise ScenarioError(path, str(exc)) from exc


def _location(error: dict[str, Any]) -> str:
    parts: list[str] = []
    for item in error.get("loc", ()):
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts) or "<root>"


class ScenarioParser:
    """Parses scenario documents from JSON text or plain dicts."""

    def parse_json(self, text: str) -> Scenario:
        """Parse a JSON string.

        Raises ScenarioError on malformed JSON or an invalid document.
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError("<root>", f"invalid JSON: {exc}") from exc
        return self.parse_dict(data)

    def parse_dict(self, data: Any) -> Scenario:
        """Validate and build a Scenario; constraints come back canonicalized."""
        if not isinstance(data, dict):
            raise ScenarioError("<root>", "top-level value must be an object")
        try:
            model = ScenarioModel.model_validate(data)
        except ValidationError as exc:
            first = exc.errors()[0]
            raise ScenarioError(_location(first), first["msg"]) from exc

        with _field("graph.edges"):
            graph = DirectedGraph.from_edges(model.graph.n, model.graph.edges)

        constraints = None
        if model.constraints is not None:
            with _field("constraints"):
                constraints = FlowConstraints(
                    lower=tuple(model.constraints.lower), upper=tuple(model.constraints.upper)
                )

        with _field("hamiltonian"):
            hamiltonian = (
                Hamiltonian.quadratic()
                if model.hamiltonian.kind == "quadratic"
                else Hamiltonian.weighted(model.hamiltonian.weights or ())
            )
            if model.hamiltonian.kind == "quadratic" and model.hamiltonian.weights is not None:
                raise ScenarioError("hamiltonian.weights", "the quadratic Hamiltonian takes no weights")

        controller = build_controller(model.controller.kind, model.controller.gains, constraints)

        disturbance = None
        if model.disturbance is not None:
            with _field("disturbance"):
                disturbance = DisturbanceModel(
                    E=tuple(tuple(row) for row in model.disturbance.E), d_bar=tuple(model.disturbance.d)
                )

        with _field("integrator"):
            integrator = IntegratorParams(
                step=model.integrator.step,
                horizon=model.integrator.horizon,
                stride=model.integrator.stride,
            )

        tolerances = None
        if model.tolerances is not None:
            defaults = ToleranceConfig()
            tolerances = ToleranceConfig(
                consensus=model.tolerances.consensus or defaults.consensus,
                steady_rate=model.tolerances.steady_rate or defaults.steady_rate,
            )

        scenario = Scenario(
            name=model.name,
            notes=model.notes,
            graph=graph,
            hamiltonian=hamiltonian,
            controller=controller,
            disturbance=disturbance,
            x0=tuple(model.x0),
            xc0=tuple(model.xc0),
            x_c_bar=None if model.x_c_bar is None else tuple(model.x_c_bar),
            integrator=integrator,
            tolerances=tolerances,
            metadata=dict(model.metadata),
        )
        canonical = scenario.canonicalized()
        if canonical is not scenario:
            logger.info(
                "Scenario %r: reversed edges %s into a compatible orientation",
                scenario.name,
                canonical.metadata["reversed_edges"],
            )
        return canonical


def dump_scenario(scenario: Scenario) -> str:
    """Serialize to the canonical JSON text (trailing newline included)."""
    return json.dumps(scenario.to_dict(), indent=2) + "\n"


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file.

    Raises:
        ScenarioError: If the document is invalid.
        OSError: If the file cannot be read.
    """
    path = Path(path)
    scenario = ScenarioParser().parse_json(path.read_text(encoding="utf-8"))
    logger.debug("Loaded scenario %r from %s", scenario.name, path)
    return scenario


def save_scenario(scenario: Scenario, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dump_scenario(scenario), encoding="utf-8")
    logger.info("Wrote scenario %r to %s", scenario.name, path)
    return path


def load_graph(path: str | Path) -> DirectedGraph:
    """Read a graph from a ``{"n", "edges"}`` document or from a scenario's ``graph`` entry.

    Raises:
        ScenarioError: If the document is not a valid graph.
        OSError: If the file cannot be read.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError("<root>", f"invalid JSON: {exc}") from exc
    prefix = ""
    if isinstance(data, dict) and "graph" in data:
        data, prefix = data["graph"], "graph."
    try:
        model = GraphModel.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ScenarioError(prefix + _location(first), first["msg"]) from exc
    with _field(prefix + "edges"):
        return DirectedGraph.from_edges(model.n, model.edges)
