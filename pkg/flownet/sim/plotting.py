"""SVG line plots of vertex trajectories."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from flownet.sim.schema import Trajectory  # noqa: E402

logger = logging.getLogger(__name__)

# 960 x 540 px canvas
FIGURE_SIZE = (9.6, 5.4)
FIGURE_DPI = 100


def plot_trajectory_svg(trajectory: Trajectory, path: str | Path, title: str | None = None) -> Path:
    """Draw one curve per vertex state ``x_i(t)`` into a standalone SVG file."""
    path = Path(path)
    with matplotlib.rc_context({"svg.fonttype": "path", "svg.hashsalt": "flownet"}):
        fig = Figure(figsize=FIGURE_SIZE, dpi=FIGURE_DPI)
        ax = fig.add_subplot()
        for i in range(trajectory.n):
            ax.plot(trajectory.times, trajectory.x[:, i], label=f"x_{i}")
        ax.set_xlabel("t")
        ax.set_ylabel("x")
        if title:
            ax.set_title(title)
        ax.grid(True, alpha=0.3)
        if trajectory.n:
            ax.legend(loc="best")
        fig.savefig(path, format="svg", metadata={"Date": None})
    logger.info("Wrote trajectory plot to %s", path)
    return path
