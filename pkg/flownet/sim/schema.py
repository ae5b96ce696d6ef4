"""
Simulation data structures for flownet.

Covers the integrator parameters, the terminal summary of a run and the
sampled trajectory itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from flownet.exceptions import DimensionError, FlownetError


@dataclass(frozen=True)
class IntegratorParams:
    """Fixed-step RK4 settings: step ``h``, final time and recording stride."""

    step: float = 0.01
    horizon: float = 100.0
    stride: int = 10

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and np.isfinite(self.step)):
            raise FlownetError(f"Integrator step must be finite and > 0, got {self.step}")
        if not (self.horizon >= 0.0 and np.isfinite(self.horizon)):
            raise FlownetError(f"Integrator horizon must be finite and >= 0, got {self.horizon}")
        if isinstance(self.stride, bool) or not isinstance(self.stride, int) or self.stride < 1:
            raise FlownetError(f"Integrator stride must be an integer >= 1, got {self.stride!r}")

    @property
    def n_steps(self) -> int:
        """Number of RK4 steps needed to reach the horizon (last one may be shorter)."""
        return int(np.ceil(self.horizon / self.step - 1e-9)) if self.horizon > 0 else 0

    def to_dict(self) -> dict:
        return {"step": self.step, "horizon": self.horizon, "stride": self.stride}


@dataclass
class TerminalSummary:
    """Steady-state and consensus verdict at the last sample."""

    steady: bool
    consensus: bool
    alpha: float
    max_rate: float
    flow_rate: float = 0.0
    spread: float = 0.0

    def to_dict(self) -> dict:
        return {
            "steady": self.steady,
            "consensus": self.consensus,
            "alpha": self.alpha,
            "max_rate": self.max_rate,
            "flow_rate": self.flow_rate,
            "spread": self.spread,
        }


@dataclass
class Trajectory:
    """Time-sampled record of a run.

    ``x`` is (samples, n); ``x_c``, ``u`` and ``shifted_flows`` are (samples, m).
    ``lyapunov`` is present only when requested and applicable.
    """

    times: np.ndarray
    x: np.ndarray
    x_c: np.ndarray
    u: np.ndarray
    lyapunov: np.ndarray | None = None
    shifted_flows: np.ndarray | None = None
    summary: TerminalSummary | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        count = self.times.shape[0]
        for name in ("x", "x_c", "u"):
            arr = getattr(self, name)
            if arr.ndim != 2 or arr.shape[0] != count:
                raise DimensionError(f"trajectory {name}", (count, "*"), arr.shape)
        for name in ("lyapunov", "shifted_flows"):
            arr = getattr(self, name)
            if arr is not None and arr.shape[0] != count:
                raise DimensionError(f"trajectory {name}", (count,), arr.shape)
        if count > 1 and not np.all(np.diff(self.times) > 0):
            raise FlownetError("Trajectory times must be strictly increasing")

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def m(self) -> int:
        return self.x_c.shape[1]

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def final_x(self) -> np.ndarray:
        return self.x[-1]

    @property
    def final_x_c(self) -> np.ndarray:
        return self.x_c[-1]

    @property
    def final_u(self) -> np.ndarray:
        return self.u[-1]
