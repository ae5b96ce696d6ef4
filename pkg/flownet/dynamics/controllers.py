"""
Controller and disturbance descriptions.

A controller is one of three edge-level feedback laws:

- ``P``: flows ``u = -R B^T dH/dx``.
- ``PI``: flows ``u = -R B^T dH/dx - x_c`` with integral state ``x_c``.
- ``PI_sat``: PI with unit gain, flows clamped into per-edge intervals.

Disturbances are constant in/outflows ``E d_bar`` at terminal vertices.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from flownet.exceptions import DimensionError, FlownetError
from flownet.graph.schema import FlowConstraints


class ControllerKind(str, Enum):
    PROPORTIONAL = "P"
    PI = "PI"
    SATURATED_PI = "PI_sat"


@dataclass(frozen=True)
class ControllerSpec:
    """Feedback law plus its parameters.

    ``gains`` is the diagonal of R for ``P`` and ``PI``; the saturated loop
    carries ``constraints`` instead and uses R = I.
    """

    kind: ControllerKind
    gains: tuple[float, ...] | None = None
    constraints: FlowConstraints | None = None

    def __post_init__(self) -> None:
        kind = ControllerKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ControllerKind.SATURATED_PI:
            if self.constraints is None:
                raise FlownetError("PI_sat controller requires flow constraints")
            if self.gains is not None:
                raise FlownetError("PI_sat controller has unit gain; gains are not accepted")
            return
        if self.gains is None:
            raise FlownetError(f"{kind.value} controller requires a gain vector")
        gains = tuple(float(r) for r in self.gains)
        for i, r in enumerate(gains):
            if not (r > 0.0 and np.isfinite(r)):
                raise FlownetError(f"Gain of edge {i} must be finite and > 0, got {r}")
        object.__setattr__(self, "gains", gains)

    @classmethod
    def proportional(cls, gains: Sequence[float]) -> ControllerSpec:
        return cls(kind=ControllerKind.PROPORTIONAL, gains=tuple(gains))

    @classmethod
    def pi(cls, gains: Sequence[float]) -> ControllerSpec:
        return cls(kind=ControllerKind.PI, gains=tuple(gains))

    @classmethod
    def saturated_pi(cls, constraints: FlowConstraints) -> ControllerSpec:
        return cls(kind=ControllerKind.SATURATED_PI, constraints=constraints)

    @property
    def is_saturated(self) -> bool:
        return self.kind is ControllerKind.SATURATED_PI

    def gain_array(self, m: int) -> np.ndarray:
        """Diagonal of R (all ones for the saturated loop)."""
        if self.gains is None:
            return np.ones(m)
        if len(self.gains) != m:
            raise DimensionError("controller gains", (m,), (len(self.gains),))
        return np.array(self.gains, dtype=float)

    def to_dict(self) -> dict:
        if self.kind is ControllerKind.SATURATED_PI:
            return {"kind": self.kind.value}
        return {"kind": self.kind.value, "gains": list(self.gains or ())}


@dataclass(frozen=True)
class DisturbanceModel:
    """Constant in/outflows: column ``j`` of E selects one vertex with sign +1 or -1."""

    E: tuple[tuple[int, ...], ...]
    d_bar: tuple[float, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.E)
        d_bar = tuple(float(v) for v in self.d_bar)
        k = len(d_bar)
        for i, row in enumerate(rows):
            if len(row) != k:
                raise DimensionError(f"disturbance E row {i}", (k,), (len(row),))
        for j in range(k):
            column = [row[j] for row in rows]
            nonzero = [v for v in column if v != 0]
            if len(nonzero) != 1 or nonzero[0] not in (-1, 1):
                raise FlownetError(
                    f"Column {j} of E must hold exactly one entry equal to +1 or -1"
                )
        object.__setattr__(self, "E", rows)
        object.__setattr__(self, "d_bar", d_bar)

    @classmethod
    def from_injection(cls, injection: np.ndarray, atol: float = 0.0) -> DisturbanceModel | None:
        """One terminal per vertex with nonzero net injection; ``None`` when all vanish.

        The signed unit column points in the direction of the injection and
        ``d_bar`` carries its magnitude.
        """
        injection = np.asarray(injection, dtype=float)
        terminals = [i for i, v in enumerate(injection) if abs(v) > atol]
        if not terminals:
            return None
        n = injection.shape[0]
        e = [[0] * len(terminals) for _ in range(n)]
        d_bar = []
        for j, vertex in enumerate(terminals):
            e[vertex][j] = 1 if injection[vertex] > 0 else -1
            d_bar.append(abs(float(injection[vertex])))
        return cls(E=tuple(tuple(row) for row in e), d_bar=tuple(d_bar))

    @property
    def n(self) -> int:
        return len(self.E)

    @property
    def k(self) -> int:
        return len(self.d_bar)

    def matrix(self) -> np.ndarray:
        return np.array(self.E, dtype=float).reshape(self.n, self.k)

    def injection(self) -> np.ndarray:
        """Net inflow per vertex, ``E d_bar``."""
        return self.matrix() @ np.array(self.d_bar, dtype=float)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.injection())

    def to_dict(self) -> dict:
        return {"E": [list(row) for row in self.E], "d": list(self.d_bar)}
