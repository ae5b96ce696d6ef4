# tests/conftest.py
"""Shared fixtures: small scenario documents in their JSON wire form."""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any

import pytest

# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------

_TRIANGLE_PI: dict[str, Any] = {
    "name": "triangle-pi",
    "graph": {"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]},
    "constraints": None,
    "hamiltonian": {"kind": "quadratic"},
    "controller": {"kind": "PI", "gains": [1.0, 1.0, 1.0]},
    "disturbance": None,
    "x0": [1.0, 2.0, 6.0],
    "xc0": [0.0, 0.0, 0.0],
    "integrator": {"step": 0.05, "horizon": 40.0, "stride": 20},
}


@pytest.fixture
def scenario_document() -> dict[str, Any]:
    """A valid PI scenario on a directed triangle (fresh copy per test)."""
    return copy.deepcopy(_TRIANGLE_PI)


@pytest.fixture
def scenario_file(tmp_path: Path, scenario_document: dict[str, Any]) -> Path:
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps(scenario_document), encoding="utf-8")
    return path
