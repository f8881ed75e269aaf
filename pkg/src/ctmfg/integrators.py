"""Fixed-step fourth-order Runge-Kutta over a time grid."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import DimensionMismatch
from .model import TimeGrid

VectorField = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(f: VectorField, t: float, y, h: float):
    """One classical RK4 step; negative h steps backward in time."""
    if h == 0:
        raise ValueError("rk4_step requires a nonzero step")
    k1 = np.asarray(f(t, y), dtype=float)
    if k1.shape != np.shape(y):
        raise DimensionMismatch(
            f"vector field returned shape {k1.shape} for state of shape {np.shape(y)}"
        )
    half = 0.5 * h
    k2 = np.asarray(f(t + half, y + half * k1), dtype=float)
    k3 = np.asarray(f(t + half, y + half * k2), dtype=float)
    k4 = np.asarray(f(t + h, y + h * k3), dtype=float)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_grid(f: VectorField, y_start, grid: TimeGrid, direction: str = "forward") -> np.ndarray:
    """RK4 iterates on every grid node.

    Forward fills nodes 0..K from node 0. Backward fills nodes K..0 from node K
    by forward-integrating the time-reversed field w(s) := y(T - s).
    """
    y = np.asarray(y_start, dtype=float)
    if y.ndim != 1:
        raise DimensionMismatch("y_start must be a 1-D vector")
    if direction == "backward":
        horizon = grid.horizon

        def reversed_field(s, w):
            return -np.asarray(f(horizon - s, w), dtype=float)

        return integrate_grid(reversed_field, y, grid, "forward")[::-1].copy()
    if direction != "forward":
        raise ValueError("direction must be 'forward' or 'backward'")
    out = np.empty((grid.n_nodes, y.shape[0]))
    out[0] = y
    times = grid.times
    for k in range(grid.n_steps):
        y = rk4_step(f, float(times[k]), y, grid.dt)
        out[k + 1] = y
    return out
