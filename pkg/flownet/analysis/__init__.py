"""
flownet analysis.

Matching condition, permission sets, Lyapunov functions, consensus checks and
structural convergence prediction.
"""

from flownet.analysis.consensus import (
    EquilibriumClass,
    classify_equilibrium,
    component_consensus,
    consensus_check,
    gradient_spread,
)
from flownet.analysis.lyapunov import (
    applicable_lyapunov,
    lyapunov_pi,
    lyapunov_proportional,
    lyapunov_saturated,
    lyapunov_saturated_gradient,
)
from flownet.analysis.matching import (
    MatchingResult,
    PermissionSet,
    adjust_into_permission_set,
    injection_vector,
    is_matched,
    solve_matching,
)
from flownet.analysis.predictor import Verdict, predict_convergence

__all__ = [
    "EquilibriumClass",
    "MatchingResult",
    "PermissionSet",
    "Verdict",
    "adjust_into_permission_set",
    "applicable_lyapunov",
    "classify_equilibrium",
    "component_consensus",
    "consensus_check",
    "gradient_spread",
    "injection_vector",
    "is_matched",
    "lyapunov_pi",
    "lyapunov_proportional",
    "lyapunov_saturated",
    "lyapunov_saturated_gradient",
    "predict_convergence",
    "solve_matching",
]
