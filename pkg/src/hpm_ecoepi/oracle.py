"""Fixed-step RK4 reference trajectories and Hermite resampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import InitialState, ModelParams, rhs

__all__ = ["Trajectory", "NonFiniteState", "integrate", "sample", "DEFAULT_STEP"]

DEFAULT_STEP = 1e-3


class NonFiniteState(ArithmeticError):
    def __init__(self, time: float):
        self.time = time
        super().__init__(f"state became non-finite at t={time!r}")


@dataclass(frozen=True)
class Trajectory:
    params: ModelParams
    grid: np.ndarray
    samples: np.ndarray  # shape (len(grid), 3)
    step: float

    @property
    def t_end(self) -> float:
        return float(self.grid[-1])

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.samples.setflags(write=False)


def _time_grid(t_end: float, step: float) -> np.ndarray:
    n = int(math.floor(t_end / step * (1.0 + 1e-12)))
    grid = step * np.arange(n + 1, dtype=float)
    # snap a final node that rounding put a hair away from t_end
    if math.isclose(grid[-1], t_end, rel_tol=1e-12):
        grid[-1] = t_end
    elif grid[-1] < t_end:
        grid = np.append(grid, t_end)
    else:
        grid[-1] = t_end
    return grid


def integrate(params: ModelParams, ics: InitialState, t_end: float, step: float = DEFAULT_STEP) -> Trajectory:
    """Classical fourth-order Runge-Kutta with a fixed step.

    The final interval is shortened so the last node is exactly ``t_end``.
    Raises :class:`NonFiniteState` if the state overflows.
    """
    if not (t_end > 0 and math.isfinite(t_end)):
        raise ValueError("t_end must be positive and finite")
    if not (step > 0 and step <= t_end):
        raise ValueError("step must satisfy 0 < step <= t_end")
    grid = _time_grid(t_end, step)
    out = np.empty((grid.size, 3))
    y = ics.as_array()
    out[0] = y
    f = lambda state: rhs(params, state)  # noqa: E731
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(grid.size - 1):
            h = grid[n + 1] - grid[n]
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise NonFiniteState(float(grid[n + 1]))
            out[n + 1] = y
    return Trajectory(params, grid, out, float(step))


def sample(traj: Trajectory, t):
    """Cubic Hermite interpolation with slopes from the model right-hand side.

    Scalar ``t`` gives shape ``(3,)``; an array of times gives ``(len(t), 3)``.
    Grid times return the stored samples exactly.
    """
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    grid = traj.grid
    if np.any(tt < 0) or np.any(tt > grid[-1]) or not np.all(np.isfinite(tt)):
        raise ValueError(f"t outside [0, {grid[-1]}]")
    idx = np.clip(np.searchsorted(grid, tt, side="right") - 1, 0, grid.size - 2)
    t0, t1 = grid[idx], grid[idx + 1]
    h = (t1 - t0)[:, None]
    y0, y1 = traj.samples[idx], traj.samples[idx + 1]
    m0 = rhs(traj.params, y0.T).T
    m1 = rhs(traj.params, y1.T).T
    th = ((tt - t0) / (t1 - t0))[:, None]
    th2, th3 = th * th, th * th * th
    h00 = 2 * th3 - 3 * th2 + 1
    h10 = th3 - 2 * th2 + th
    h01 = -2 * th3 + 3 * th2
    h11 = th3 - th2
    out = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
    if np.ndim(t) == 0:
        return out[0]
    return out
