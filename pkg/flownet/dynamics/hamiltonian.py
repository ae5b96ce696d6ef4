"""
Storage functions on vertex space.

Only separable quadratic Hamiltonians are provided: ``H(x) = 1/2 * sum(w_i x_i^2)``
with strictly positive weights (``w = 1`` for the plain quadratic). The Hessian
is the constant diagonal ``diag(w)``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from flownet.exceptions import DimensionError, FlownetError


class HamiltonianKind(str, Enum):
    QUADRATIC = "quadratic"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class Hamiltonian:
    """Separable quadratic storage function."""

    kind: HamiltonianKind = HamiltonianKind.QUADRATIC
    weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        kind = HamiltonianKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is HamiltonianKind.QUADRATIC:
            if self.weights is not None:
                raise FlownetError("A quadratic Hamiltonian takes no weights")
            return
        if not self.weights:
            raise FlownetError("A weighted Hamiltonian needs a non-empty weight vector")
        weights = tuple(float(w) for w in self.weights)
        bad = [i for i, w in enumerate(weights) if not (w > 0.0 and np.isfinite(w))]
        if bad:
            raise FlownetError(f"Hamiltonian weights must be finite and > 0 (vertex {bad[0]})")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def quadratic(cls) -> Hamiltonian:
        return cls()

    @classmethod
    def weighted(cls, weights: Sequence[float]) -> Hamiltonian:
        return cls(kind=HamiltonianKind.WEIGHTED, weights=tuple(weights))

    def hessian_diag(self, n: int) -> np.ndarray:
        """Diagonal of the (constant) Hessian for an ``n``-vertex state."""
        if self.weights is None:
            return np.ones(n)
        if len(self.weights) != n:
            raise DimensionError("Hamiltonian weights", (n,), (len(self.weights),))
        return np.array(self.weights, dtype=float)

    def value(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return 0.5 * float(np.dot(self.hessian_diag(x.shape[0]) * x, x))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """dH/dx, evaluated componentwise."""
        x = np.asarray(x, dtype=float)
        if self.weights is None:
            return x.copy()
        return self.hessian_diag(x.shape[0]) * x

    def to_dict(self) -> dict:
        if self.weights is None:
            return {"kind": self.kind.value}
        return {"kind": self.kind.value, "weights": list(self.weights)}
