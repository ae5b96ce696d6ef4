"""
Componentwise saturation and its integral.

``sat(x; a, b)`` clamps each component to ``[a_i, b_i]``. The integral
``S(x; a, b)_i`` is the integral of ``sat(y; a_i, b_i)`` from 0 to ``x_i``; it is
C1, convex and piecewise quadratic for any bounds ``a < b``, including shifted
bounds that exclude zero.
"""

from __future__ import annotations

import numpy as np

from flownet.exceptions import DimensionError


def _check_shapes(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> None:
    if lower.shape != x.shape:
        raise DimensionError("saturation lower bounds", x.shape, lower.shape)
    if upper.shape != x.shape:
        raise DimensionError("saturation upper bounds", x.shape, upper.shape)


def saturate(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Clamp ``x`` componentwise into ``[lower, upper]``.

    Infinite bounds are allowed and leave the corresponding side open.
    """
    x = np.asarray(x, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    _check_shapes(x, lower, upper)
    return np.minimum(np.maximum(x, lower), upper)


def _antiderivative(y: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # C1 antiderivative of sat(.; a, b): y^2/2 inside the band, tangent lines outside.
    # Infinite bounds produce nan in the branch that np.where discards.
    with np.errstate(invalid="ignore", over="ignore"):
        return np.where(
            y > b,
            b * y - 0.5 * b * b,
            np.where(y < a, a * y - 0.5 * a * a, 0.5 * y * y),
        )


def saturation_integral(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Componentwise integral of the saturation function from 0 to ``x``."""
    x = np.asarray(x, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    _check_shapes(x, lower, upper)
    return _antiderivative(x, lower, upper) - _antiderivative(np.zeros_like(x), lower, upper)
