"""Configuration data structures for flownet.

All types are plain dataclasses; parsing lives in ``flownet.config.parser``.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ToleranceConfig:
    """Numerical tolerances shared by simulation and analysis."""

    consensus: float = 1e-4  # max deviation of dH/dx from its mean
    steady_rate: float = 1e-6  # |xdot|_inf below which a run is steady
    equilibrium: float = 1e-8
    matching_rank: float = 1e-10  # relative to the largest singular value of B
    matching_residual: float = 1e-10
    permission_margin: float = 1e-12
    divergence_bound: float = 1e12


@dataclass
class IntegratorDefaults:
    """Fixed-step RK4 defaults used when a scenario omits them."""

    step: float = 0.01
    horizon: float = 100.0
    stride: int = 10


@dataclass
class CoverConfig:
    """Size guards for the exhaustive graph procedures."""

    exact_max_edges: int = 16
    brute_force_max_bidirectional: int = 20


@dataclass
class FlownetConfig:
    """Complete flownet configuration."""

    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    integrator: IntegratorDefaults = field(default_factory=IntegratorDefaults)
    cover: CoverConfig = field(default_factory=CoverConfig)
