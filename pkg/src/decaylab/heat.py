"""Degenerate heat flow v_t = r^alpha Laplace v with Dirichlet ends.

The discrete operator L = r^alpha Delta_h is symmetric and nonpositive in the
L^2_{dmu} inner product built from ``RadialGrid.w_mu``, so Crank-Nicolson
steps are contractions in that norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from .grid import InitialData, ModelParams, RadialGrid

__all__ = [
    "HeatState",
    "HeatStepper",
    "l2_dmu_norm",
    "dmu_inner",
    "heat_operator",
    "apply_heat_operator",
    "asymptotic_profile",
    "step_heat",
    "run_heat",
]


@dataclass(frozen=True, eq=False)
class HeatState:
    v: np.ndarray
    t: float
    step: int = 0


def l2_dmu_norm(f: np.ndarray, grid: RadialGrid, params: ModelParams | None = None) -> float:
    """(int |f|^2 r^-alpha dx)^(1/2)."""
    return float(np.sqrt(grid.integrate_mu(np.asarray(f) ** 2)))


def dmu_inner(f: np.ndarray, g: np.ndarray, grid: RadialGrid) -> float:
    return grid.integrate_mu(f * g)


def heat_operator(grid: RadialGrid) -> sparse.csc_matrix:
    """Tridiagonal r^alpha Delta_h on the interior nodes."""
    n, dr, N = grid.n, grid.dr, grid.params.dim
    rh = grid.r_half ** (N - 1)
    ri = grid.r[1:-1]
    scale = ri ** grid.params.alpha / (dr * dr * ri ** (N - 1))
    main = -(rh[:-1] + rh[1:]) * scale
    lower = rh[1:-1] * scale[1:]
    upper = rh[1:-1] * scale[:-1]
    return sparse.diags([lower, main, upper], [-1, 0, 1], shape=(n, n), format="csc")


def apply_heat_operator(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    out = grid.r ** grid.params.alpha * grid.laplacian(f)
    out[0] = out[-1] = 0.0
    return out


def asymptotic_profile(data: InitialData | tuple, params: ModelParams, grid: RadialGrid):
    """Initial value u0 + r^alpha u1 of the comparison heat flow, and its L^2_dmu norm."""
    u0, u1 = data.sample(grid) if isinstance(data, InitialData) else data
    f = u0 + grid.r ** params.alpha * u1
    f[0] = f[-1] = 0.0
    return f, l2_dmu_norm(f, grid)


class HeatStepper:
    """Crank-Nicolson with a single sparse LU factorization reused per step."""

    def __init__(self, grid: RadialGrid, dt: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.grid = grid
        self.dt = dt
        A = heat_operator(grid)
        eye = sparse.identity(grid.n, format="csc")
        self._rhs = (eye + 0.5 * dt * A).tocsr()
        lhs = (eye - 0.5 * dt * A).tocsc()
        self._lu = splu(lhs)
        # I - dt/2 A is diagonally dominant for dt > 0
        assert np.all(np.isfinite(self._lu.U.diagonal())) and np.all(self._lu.U.diagonal() != 0)

    def __call__(self, state: HeatState) -> HeatState:
        interior = state.v[1:-1]
        out = np.zeros_like(state.v)
        out[1:-1] = self._lu.solve(self._rhs @ interior)
        step = state.step + 1
        return HeatState(out, step * self.dt, step)


def step_heat(state: HeatState, grid: RadialGrid, params: ModelParams | None, dt: float) -> HeatState:
    """One Crank-Nicolson step (factorizes; use HeatStepper for trajectories)."""
    nxt = HeatStepper(grid, dt)(HeatState(state.v, 0.0, 0))
    return HeatState(nxt.v, state.t + dt, state.step + 1)


def run_heat(f: np.ndarray, grid: RadialGrid, t_final: float, dt: float,
             sample_times: Sequence[float] | None = None) -> list[HeatState]:
    """Heat orbit e^{tL} f at the requested times (nearest step)."""
    if sample_times is None:
        sample_times = [0.0, t_final]
    wanted = [int(round(t / dt)) for t in sample_times]
    stepper = HeatStepper(grid, dt)
    v = np.array(f, dtype=float)
    v[0] = v[-1] = 0.0
    state = HeatState(v, 0.0, 0)
    by_step = {0: state}
    targets = set(wanted)
    for _ in range(max(wanted)):
        state = stepper(state)
        if state.step in targets:
            by_step[state.step] = state
    return [by_step[k] for k in wanted]
