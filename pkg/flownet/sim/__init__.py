"""
flownet simulation.

Fixed-step RK4 integration, terminal summaries and trajectory output.
"""

from flownet.sim.csv_io import read_trajectory_csv, write_trajectory_csv
from flownet.sim.integrator import integrate, integrate_until_settled, richardson_ratio, rk4_step
from flownet.sim.plotting import plot_trajectory_svg
from flownet.sim.schema import IntegratorParams, TerminalSummary, Trajectory
from flownet.sim.steady import detect_steady, steady_rates, summarize_terminal

__all__ = [
    "IntegratorParams",
    "TerminalSummary",
    "Trajectory",
    "detect_steady",
    "integrate",
    "integrate_until_settled",
    "plot_trajectory_svg",
    "read_trajectory_csv",
    "richardson_ratio",
    "rk4_step",
    "steady_rates",
    "summarize_terminal",
    "write_trajectory_csv",
]
