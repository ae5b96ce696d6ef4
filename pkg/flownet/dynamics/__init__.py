"""
flownet dynamics.

Hamiltonians, the saturation function, controller and disturbance models, and
the closed-loop right-hand sides.
"""

from flownet.dynamics.closed_loop import (
    ClosedLoop,
    energy_balance,
    energy_rate,
    lipschitz_bound,
    rhs_pi,
    rhs_pi_saturated,
    rhs_proportional,
    shifted_flows,
)
from flownet.dynamics.controllers import ControllerKind, ControllerSpec, DisturbanceModel
from flownet.dynamics.hamiltonian import Hamiltonian, HamiltonianKind
from flownet.dynamics.saturation import saturate, saturation_integral

__all__ = [
    "ClosedLoop",
    "ControllerKind",
    "ControllerSpec",
    "DisturbanceModel",
    "Hamiltonian",
    "HamiltonianKind",
    "energy_balance",
    "energy_rate",
    "lipschitz_bound",
    "rhs_pi",
    "rhs_pi_saturated",
    "rhs_proportional",
    "saturate",
    "saturation_integral",
    "shifted_flows",
]
