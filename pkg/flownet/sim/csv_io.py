"""
Trajectory CSV files.

Header ``t,x_0..x_{n-1},xc_0..xc_{m-1},u_0..u_{m-1}[,V]``; one row per sample.
Values are written with ``repr`` so that reading them back is exact.
"""

from __future__ import annotations

import csv
import logging
import re
from pathlib import Path

import numpy as np

from flownet.exceptions import FlownetError
from flownet.sim.schema import Trajectory

logger = logging.getLogger(__name__)

_COLUMN = re.compile(r"^(x|xc|u)_(\d+)$")


def trajectory_header(n: int, m: int, with_lyapunov: bool = False) -> list[str]:
    header = ["t"]
    header += [f"x_{i}" for i in range(n)]
    header += [f"xc_{j}" for j in range(m)]
    header += [f"u_{j}" for j in range(m)]
    if with_lyapunov:
        header.append("V")
    return header


def write_trajectory_csv(trajectory: Trajectory, path: str | Path) -> Path:
    """Write ``trajectory`` to ``path`` and return the path."""
    path = Path(path)
    with_v = trajectory.lyapunov is not None
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trajectory_header(trajectory.n, trajectory.m, with_v))
        for k in range(len(trajectory)):
            row = [trajectory.times[k], *trajectory.x[k], *trajectory.x_c[k], *trajectory.u[k]]
            if with_v:
                row.append(trajectory.lyapunov[k])
            writer.writerow([repr(float(v)) for v in row])
    logger.info("Wrote %d trajectory rows to %s", len(trajectory), path)
    return path


def read_trajectory_csv(path: str | Path) -> Trajectory:
    """Parse a file produced by ``write_trajectory_csv``.

    The terminal summary is not stored in the file and is left unset.

    Raises:
        FlownetError: If the header does not follow the trajectory layout.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "t":
        raise FlownetError(f"{path}: not a trajectory CSV (missing 't' column)")
    header = rows[0]
    counts = {"x": 0, "xc": 0, "u": 0}
    for name in header[1:]:
        match = _COLUMN.match(name)
        if match:
            counts[match.group(1)] += 1
        elif name != "V":
            raise FlownetError(f"{path}: unexpected column {name!r}")
    n, m = counts["x"], counts["xc"]
    with_v = header[-1] == "V"
    if header != trajectory_header(n, m, with_v):
        raise FlownetError(f"{path}: columns are out of order or incomplete")

    data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    data = data.reshape(len(rows) - 1, len(header))
    return Trajectory(
        times=data[:, 0],
        x=data[:, 1 : 1 + n],
        x_c=data[:, 1 + n : 1 + n + m],
        u=data[:, 1 + n + m : 1 + n + 2 * m],
        lyapunov=data[:, -1] if with_v else None,
    )
