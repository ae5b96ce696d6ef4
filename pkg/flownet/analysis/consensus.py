"""
Consensus detection and equilibrium classification.

A state is in consensus (load balanced) when every component of ``dH/dx``
equals a common value ``alpha``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from flownet.dynamics.hamiltonian import Hamiltonian

if TYPE_CHECKING:
    from flownet.scenario.schema import Scenario

# Threshold on |xdot|_inf and |B^T dH/dx|_inf when classifying a state
EQUILIBRIUM_TOL = 1e-8


def consensus_check(x: np.ndarray, H: Hamiltonian, tol: float = 1e-4) -> tuple[bool, float]:
    """Return ``(in_consensus, alpha)`` with ``alpha`` the mean of ``dH/dx``."""
    grad = H.gradient(np.asarray(x, dtype=float))
    if grad.size == 0:
        return True, 0.0
    alpha = float(np.mean(grad))
    return bool(np.max(np.abs(grad - alpha)) < tol), alpha


def gradient_spread(x: np.ndarray, H: Hamiltonian) -> float:
    """``max(dH/dx) - min(dH/dx)``; zero exactly at consensus."""
    grad = H.gradient(np.asarray(x, dtype=float))
    return float(np.ptp(grad)) if grad.size else 0.0


def component_consensus(
    x: np.ndarray,
    H: Hamiltonian,
    components: Sequence[Sequence[int]],
    tol: float = 1e-4,
) -> list[tuple[bool, float]]:
    """Consensus verdict per vertex set (e.g. per weakly connected component)."""
    grad = H.gradient(np.asarray(x, dtype=float))
    results = []
    for comp in components:
        values = grad[list(comp)]
        alpha = float(np.mean(values))
        results.append((bool(np.max(np.abs(values - alpha)) < tol), alpha))
    return results


@dataclass
class EquilibriumClass:
    """Outcome of ``classify_equilibrium``."""

    is_equilibrium: bool
    gradient_aligned: bool
    max_rate: float
    output_norm: float

    def as_tuple(self) -> tuple[bool, bool]:
        return self.is_equilibrium, self.gradient_aligned

    def to_dict(self) -> dict:
        return {
            "is_equilibrium": self.is_equilibrium,
            "gradient_aligned": self.gradient_aligned,
            "max_rate": self.max_rate,
            "output_norm": self.output_norm,
        }


def classify_equilibrium(
    x: np.ndarray,
    x_c: np.ndarray,
    scenario: Scenario,
    tol: float = EQUILIBRIUM_TOL,
) -> EquilibriumClass:
    """Decide whether ``(x, x_c)`` is an equilibrium of the scenario's loop.

    Only ``xdot`` is judged: at a non-consensus equilibrium of the saturated
    loop the integral state keeps drifting while the clamped flows stay put.
    ``gradient_aligned`` reports whether ``B^T dH/dx`` vanishes.
    """
    loop = scenario.closed_loop()
    xdot, _, _ = loop.evaluate(x, x_c)
    max_rate = float(np.max(np.abs(xdot))) if xdot.size else 0.0
    y = loop.edge_output(np.asarray(x, dtype=float))
    output_norm = float(np.max(np.abs(y))) if y.size else 0.0
    return EquilibriumClass(
        is_equilibrium=max_rate < tol,
        gradient_aligned=output_norm < tol,
        max_rate=max_rate,
        output_norm=output_norm,
    )
