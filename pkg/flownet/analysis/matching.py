"""
Matching condition and permission sets.

A constant injection ``E d_bar`` is absorbed by the integral action when some
controller state satisfies ``B x_c_bar = E d_bar``. For the saturated loop the
matched state must additionally lie in the permission set, an open box built
from the flow bounds.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

from flownet.dynamics.controllers import DisturbanceModel
from flownet.exceptions import DimensionError, MatchingError
from flownet.graph.connectivity import incidence_matrix
from flownet.graph.schema import DirectedGraph, FlowConstraints

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
RESIDUAL_TOL = 1e-10
PERMISSION_MARGIN = 1e-12


# ---------------------------------------------------------------------------
# Permission set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermissionSet:
    """Per-edge open intervals ``(lower_i, upper_i)`` for matched controller states.

    Bi-directional edges get the largest interval symmetric about zero inside
    their bounds. Uni-directional edges share ``(0, u_min)`` where ``u_min`` is
    the smallest capacity among all uni-directional edges.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @classmethod
    def from_constraints(cls, c: FlowConstraints) -> PermissionSet:
        uni = c.unidirectional()
        capacities = [max(-lo, hi) for lo, hi, u in zip(c.lower, c.upper, uni, strict=True) if u]
        u_min = min(capacities, default=0.0)
        lower: list[float] = []
        upper: list[float] = []
        for lo, hi, is_uni in zip(c.lower, c.upper, uni, strict=True):
            if is_uni:
                # edges not yet canonicalized carry their flow on the negative side
                lower.append(0.0 if hi > 0.0 else -u_min)
                upper.append(u_min if hi > 0.0 else 0.0)
            elif abs(lo) <= abs(hi):
                lower.append(lo)
                upper.append(-lo)
            else:
                lower.append(-hi)
                upper.append(hi)
        return cls(lower=tuple(lower), upper=tuple(upper))

    @property
    def m(self) -> int:
        return len(self.lower)

    def contains(self, x_c: Sequence[float] | np.ndarray, margin: float = PERMISSION_MARGIN) -> bool:
        """Strict membership with ``margin`` kept from both ends of every interval."""
        arr = np.asarray(x_c, dtype=float)
        if arr.shape != (self.m,):
            raise DimensionError("controller state", (self.m,), arr.shape)
        lower = np.array(self.lower)
        upper = np.array(self.upper)
        return bool(np.all(arr > lower + margin) and np.all(arr < upper - margin))

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------


@dataclass
class MatchingResult:
    """Outcome of the least-squares matching solve."""

    x_c_bar: np.ndarray | None
    residual: float
    feasible: bool
    in_permission_set: bool | None = None

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "residual": self.residual,
            "x_c_bar": None if self.x_c_bar is None else [float(v) for v in self.x_c_bar],
            "in_permission_set": self.in_permission_set,
        }


def injection_vector(g: DirectedGraph, dist: DisturbanceModel | None) -> np.ndarray:
    """``E d_bar`` as a vertex vector (zeros without a disturbance)."""
    if dist is None:
        return np.zeros(g.n)
    if dist.n != g.n:
        raise DimensionError("disturbance E", (g.n, dist.k), (dist.n, dist.k))
    return dist.injection()


def is_matched(
    g: DirectedGraph,
    dist: DisturbanceModel | None,
    x_c_bar: Sequence[float] | np.ndarray,
    residual_tol: float = RESIDUAL_TOL,
) -> bool:
    """True when ``x_c_bar`` satisfies ``B x_c_bar = E d_bar`` within tolerance."""
    ed = injection_vector(g, dist)
    x = np.asarray(x_c_bar, dtype=float)
    if x.shape != (g.m,):
        raise DimensionError("controller state", (g.m,), x.shape)
    residual = float(np.linalg.norm(incidence_matrix(g).astype(float) @ x - ed))
    return residual <= residual_tol * (1.0 + float(np.linalg.norm(ed)))


def solve_matching(
    g: DirectedGraph,
    dist: DisturbanceModel | None,
    pset: PermissionSet | None = None,
    rank_tol: float = RANK_TOL,
    residual_tol: float = RESIDUAL_TOL,
    margin: float = PERMISSION_MARGIN,
) -> MatchingResult:
    """Minimum-norm least-squares solution of ``B x_c_bar = E d_bar``.

    Feasible when the residual is at most ``residual_tol * (1 + |E d_bar|)``;
    ``x_c_bar`` is ``None`` otherwise. Membership in ``pset`` keeps ``margin``
    from every interval end.
    """
    ed = injection_vector(g, dist)
    scale = 1.0 + float(np.linalg.norm(ed))
    if g.m == 0:
        x = np.zeros(0)
        residual = float(np.linalg.norm(ed))
    else:
        b = incidence_matrix(g).astype(float)
        x, *_ = np.linalg.lstsq(b, ed, rcond=rank_tol)
        residual = float(np.linalg.norm(b @ x - ed))
    feasible = residual <= residual_tol * scale
    logger.debug("Matching solve: residual=%.3e feasible=%s", residual, feasible)
    return MatchingResult(
        x_c_bar=x if feasible else None,
        residual=residual,
        feasible=feasible,
        in_permission_set=pset.contains(x, margin) if (pset is not None and feasible) else None,
    )


def adjust_into_permission_set(
    g: DirectedGraph,
    dist: DisturbanceModel | None,
    pset: PermissionSet,
    margin: float = PERMISSION_MARGIN,
) -> np.ndarray | None:
    """Find a matched controller state strictly inside ``pset``.

    Moves the minimum-norm solution along ``ker B`` to the point with the
    largest smallest slack to the box faces (a linear program). Returns
    ``None`` when that slack does not exceed ``margin``.

    Raises:
        MatchingError: If the matching condition itself is infeasible.
    """
    if pset.m != g.m:
        raise DimensionError("permission set", (g.m,), (pset.m,))
    result = solve_matching(g, dist, pset, margin=margin)
    if not result.feasible or result.x_c_bar is None:
        raise MatchingError(f"No controller state matches the injection (residual {result.residual:.3e})")
    base = result.x_c_bar
    if result.in_permission_set:
        return base

    kernel = null_space(incidence_matrix(g).astype(float)) if g.m else np.zeros((0, 0))
    r = kernel.shape[1] if kernel.size else 0
    if r == 0:
        logger.debug("ker B is trivial and the unique matched state lies outside the permission set")
        return None

    lower = np.array(pset.lower)
    upper = np.array(pset.upper)
    # variables [z (r), s]; maximize s subject to lower + s <= base + N z <= upper - s
    ones = np.ones((g.m, 1))
    a_ub = np.vstack([np.hstack([-kernel, ones]), np.hstack([kernel, ones])])
    b_ub = np.concatenate([base - lower, upper - base])
    cost = np.zeros(r + 1)
    cost[-1] = -1.0
    solution = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (r + 1), method="highs")
    if solution.status != 0:
        logger.debug("Permission-set LP did not solve: %s", solution.message)
        return None
    slack = float(-solution.fun)
    logger.debug("Permission-set LP: best slack %.3e over %d kernel dimension(s)", slack, r)
    if slack <= margin:
        return None
    candidate = base + kernel @ solution.x[:r]
    if not pset.contains(candidate, margin):
        return None
    return candidate
