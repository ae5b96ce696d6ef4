"""
Right-hand sides of the closed-loop network dynamics.

With ``B`` the incidence matrix, ``y = B^T dH/dx`` the edge outputs and
``Ed = E d_bar`` the constant injection:

- proportional:  xdot = -B R y + Ed
- PI:            xdot = -B R y - B x_c + Ed,       x_cdot = y
- saturated PI:  xdot = B sat(-y - x_c; lo, hi) + Ed, x_cdot = y

Each right-hand side also reports the realized edge flow ``u`` so that
trajectories can record it. ``ClosedLoop`` binds one configuration for
repeated evaluation by the integrator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from flownet.dynamics.controllers import ControllerKind, ControllerSpec, DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian
from flownet.dynamics.saturation import saturate
from flownet.exceptions import DimensionError
from flownet.graph.connectivity import incidence_matrix
from flownet.graph.schema import DirectedGraph, FlowConstraints

logger = logging.getLogger(__name__)

# Relative step of the central difference in energy_rate
ENERGY_STEP = 1e-6


def _vector(name: str, value: np.ndarray, size: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (size,):
        raise DimensionError(name, (size,), arr.shape)
    return arr


def _injection(dist: DisturbanceModel | None, n: int) -> np.ndarray:
    if dist is None:
        return np.zeros(n)
    if dist.n != n:
        raise DimensionError("disturbance E", (n, dist.k), (dist.n, dist.k))
    return dist.injection()


# ---------------------------------------------------------------------------
# Closed loop
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClosedLoop:
    """A fully specified closed loop, ready for repeated evaluation.

    ``lower``/``upper`` are only set for the saturated controller.
    """

    kind: ControllerKind
    b: np.ndarray
    hamiltonian: Hamiltonian
    gains: np.ndarray
    injection: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    @classmethod
    def build(
        cls,
        g: DirectedGraph,
        hamiltonian: Hamiltonian,
        controller: ControllerSpec,
        disturbance: DisturbanceModel | None = None,
    ) -> ClosedLoop:
        b = incidence_matrix(g).astype(float)
        hamiltonian.hessian_diag(g.n)
        lower = upper = None
        if controller.constraints is not None:
            if controller.constraints.m != g.m:
                raise DimensionError("constraints", (g.m,), (controller.constraints.m,))
            lower = controller.constraints.lower_array
            upper = controller.constraints.upper_array
        logger.debug("Closed loop %s on n=%d m=%d", controller.kind.value, g.n, g.m)
        return cls(
            kind=controller.kind,
            b=b,
            hamiltonian=hamiltonian,
            gains=controller.gain_array(g.m),
            injection=_injection(disturbance, g.n),
            lower=lower,
            upper=upper,
        )

    @property
    def n(self) -> int:
        return self.b.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[1]

    def edge_output(self, x: np.ndarray) -> np.ndarray:
        """``y = B^T dH/dx``."""
        return self.b.T @ self.hamiltonian.gradient(x)

    def saturation_argument(self, x: np.ndarray, x_c: np.ndarray) -> np.ndarray:
        return -self.edge_output(x) - x_c

    def evaluate(self, x: np.ndarray, x_c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(xdot, x_cdot, u)`` at the given state."""
        x = _vector("x", x, self.n)
        x_c = _vector("x_c", x_c, self.m)
        y = self.edge_output(x)
        if self.kind is ControllerKind.PROPORTIONAL:
            u = -self.gains * y
            return self.b @ u + self.injection, np.zeros(self.m), u
        if self.kind is ControllerKind.PI:
            u = -self.gains * y - x_c
            return self.b @ u + self.injection, y, u
        u = saturate(-y - x_c, self.lower, self.upper)
        return self.b @ u + self.injection, y, u

    def derivative(self, state: np.ndarray) -> np.ndarray:
        """Stacked-state form ``[x, x_c] -> [xdot, x_cdot]`` used by the integrator."""
        xdot, xcdot, _ = self.evaluate(state[: self.n], state[self.n :])
        return np.concatenate([xdot, xcdot])

    def flows(self, x: np.ndarray, x_c: np.ndarray) -> np.ndarray:
        return self.evaluate(x, x_c)[2]


# ---------------------------------------------------------------------------
# Functional forms
# ---------------------------------------------------------------------------


def rhs_proportional(
    x: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
    R: np.ndarray,
    dist: DisturbanceModel | None = None,
) -> np.ndarray:
    """``xdot = -B R B^T dH/dx + E d_bar``."""
    loop = ClosedLoop.build(g, H, ControllerSpec.proportional(tuple(np.atleast_1d(R))), dist)
    return loop.evaluate(x, np.zeros(g.m))[0]


def rhs_pi(
    x: np.ndarray,
    x_c: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
    R: np.ndarray,
    dist: DisturbanceModel | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """``xdot = -B R B^T dH/dx - B x_c + E d_bar``, ``x_cdot = B^T dH/dx``."""
    loop = ClosedLoop.build(g, H, ControllerSpec.pi(tuple(np.atleast_1d(R))), dist)
    xdot, xcdot, _ = loop.evaluate(x, x_c)
    return xdot, xcdot


def rhs_pi_saturated(
    x: np.ndarray,
    x_c: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
    c: FlowConstraints,
    dist: DisturbanceModel | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Saturated PI loop; returns ``(xdot, x_cdot, u)`` with ``u`` the clamped flow."""
    loop = ClosedLoop.build(g, H, ControllerSpec.saturated_pi(c), dist)
    return loop.evaluate(x, x_c)


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------


def shifted_flows(u: np.ndarray, x_c_bar: np.ndarray) -> np.ndarray:
    """Flows of the disturbance-shifted system, ``u + x_c_bar``.

    At an equilibrium of the disturbed loop these satisfy ``B (u + x_c_bar) = 0``.
    """
    u = np.asarray(u, dtype=float)
    return u + _vector("x_c_bar", x_c_bar, u.shape[-1])


def energy_rate(
    x: np.ndarray,
    u: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
) -> tuple[float, float]:
    """Both sides of the energy balance of ``xdot = B u`` at one state: ``(dH/dt, u^T y)``.

    ``dH/dt`` is a central difference of H values along ``B u``; ``u^T y``
    uses the closed-form gradient.
    """
    x = _vector("x", x, g.n)
    u = _vector("u", u, g.m)
    b = incidence_matrix(g).astype(float)
    xdot = b @ u
    eps = ENERGY_STEP * (1.0 + float(np.max(np.abs(x), initial=0.0)))
    dh = (H.value(x + eps * xdot) - H.value(x - eps * xdot)) / (2.0 * eps)
    return float(dh), float(u @ (b.T @ H.gradient(x)))


def energy_balance(
    times: np.ndarray,
    x: np.ndarray,
    u: np.ndarray,
    g: DirectedGraph,
    H: Hamiltonian,
) -> tuple[np.ndarray, np.ndarray]:
    """Measured and supplied power along a sampled trajectory of ``xdot = B u``.

    Returns ``(dH/dt, u^T y)`` at the interior samples, the first from second
    order differences of ``H(x(t))``. Only undisturbed loops balance exactly.
    """
    times = np.asarray(times, dtype=float)
    if times.shape[0] < 3:
        raise ValueError("Energy balance needs at least three samples")
    b = incidence_matrix(g).astype(float)
    energy = np.array([H.value(xi) for xi in x])
    measured = np.gradient(energy, times)[1:-1]
    supplied = np.array([ui @ (b.T @ H.gradient(xi)) for xi, ui in zip(x, u, strict=True)])[1:-1]
    return measured, supplied


def lipschitz_bound(g: DirectedGraph, H: Hamiltonian) -> float:
    """Global Lipschitz constant of the saturated PI right-hand side in ``(x, x_c)``.

    With ``W`` the Hessian of H, ``|B|_2 (|B^T W|_2 + 1) + |B^T W|_2`` bounds the
    Euclidean-norm ratio of right-hand-side and state differences.
    """
    b = incidence_matrix(g).astype(float)
    if g.m == 0:
        return 0.0
    btw = np.linalg.norm(b.T * H.hessian_diag(g.n), 2)
    b_norm = np.linalg.norm(b, 2)
    return float(b_norm * (btw + 1.0) + btw)
