"""Weighted energy functionals, Hardy inequalities, rate fits, diffusion gap."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from .grid import InitialData, ModelParams, RadialGrid
from .heat import HeatState, l2_dmu_norm
from .wave import WaveState, second_time_data
from .weights import RegimeError, WeightSpec, phi_weight, psi

__all__ = [
    "EnergyRecord",
    "DataNorms",
    "DecayFit",
    "energy_dx",
    "energy_dt",
    "energy_a",
    "energy_phi",
    "energy_star",
    "hardy_check",
    "hardy_check_power",
    "diffusion_gap",
    "fit_decay_rate",
    "windowed_growth_ratio",
    "data_norms",
    "EnergyTracker",
]


def _spec(beta, t0, params: ModelParams) -> WeightSpec:
    return WeightSpec(beta, t0, params.alpha, params.dim)


def energy_dx(beta: float, t0: float, state: WaveState | np.ndarray, grid: RadialGrid,
              params: ModelParams, t: float | None = None) -> float:
    """int |grad u|^2 Psi^beta(x, t0 + t) dx, gradient on the half nodes."""
    u, t = (state.u, state.t if t is None else t) if isinstance(state, WaveState) else (state, t or 0.0)
    w = psi(_spec(beta, t0, params), grid.r_half, t)
    return grid.integrate_half(grid.gradient(u) ** 2 * w)


def energy_dt(beta: float, t0: float, state: WaveState | np.ndarray, grid: RadialGrid,
              params: ModelParams, t: float | None = None) -> float:
    """int |u_t|^2 Psi^beta(x, t0 + t) dx."""
    ut, t = (state.ut, state.t if t is None else t) if isinstance(state, WaveState) else (state, t or 0.0)
    return grid.integrate(ut ** 2 * psi(_spec(beta, t0, params), grid.r, t))


def energy_a(beta: float, t0: float, field: np.ndarray, grid: RadialGrid,
             params: ModelParams, t: float = 0.0) -> float:
    """int |w|^2 r^-alpha Psi^beta(x, t0 + t) dx."""
    return grid.integrate_mu(np.asarray(field) ** 2 * psi(_spec(beta, t0, params), grid.r, t))


def energy_phi(lam: float, t0: float, state: WaveState, grid: RadialGrid, params: ModelParams) -> float:
    """int (2 u u_t + a u^2) Phi_{lambda*}(x, t0 + t)^(-1 + 2 eps*) dx.

    Only defined for 0 <= lambda < (N-alpha)/(2-alpha).
    """
    spec = _spec(lam, t0, params)
    if not 0.0 <= lam < spec.cexp:
        raise RegimeError(f"E_Phi needs lambda in [0, {spec.cexp:g}), got {lam}")
    eps = spec.eps_star
    phi = phi_weight(spec.with_beta(spec.lambda_star), grid.r, state.t)
    weight = phi ** (-1.0 + 2.0 * eps)
    a = params.damping(grid.r)
    return grid.integrate((2.0 * state.u * state.ut + a * state.u ** 2) * weight)


def energy_star(lam: float, t0: float, state: WaveState, grid: RadialGrid, params: ModelParams) -> float:
    """2 int u u_t Psi^lambda(x, t0 + t) dx."""
    return 2.0 * grid.integrate(state.u * state.ut * psi(_spec(lam, t0, params), grid.r, state.t))


def hardy_check(w: np.ndarray, lam: float, t0: float, grid: RadialGrid, params: ModelParams):
    """Both sides of the weighted Hardy inequality with Psi weights.

    lhs = int |w|^2 r^-alpha Psi^(lam-1),
    rhs = 4 min{c, (N-2)/(2-alpha) + lam}^-2 int |grad w|^2 Psi^lam.
    """
    N, alpha = params.dim, params.alpha
    floor = -(N - 2) / (2.0 - alpha)
    if lam <= floor:
        raise RegimeError(f"Hardy inequality needs lambda > {floor:g}")
    spec = _spec(lam, t0, params)
    kappa = min(spec.cexp, (N - 2) / (2.0 - alpha) + lam)
    lhs = energy_a(lam - 1.0, t0, w, grid, params)
    rhs = 4.0 / kappa ** 2 * energy_dx(lam, t0, w, grid, params, t=0.0)
    return lhs, rhs


def hardy_check_power(w: np.ndarray, grid: RadialGrid, params: ModelParams):
    """((N-alpha)/2)^2 int |w|^2 r^-alpha  vs  int |grad w|^2 r^(2-alpha)."""
    c = ((params.dim - params.alpha) / 2.0) ** 2
    lhs = c * grid.integrate_mu(np.asarray(w) ** 2)
    rhs = grid.integrate_half(grid.gradient(w) ** 2 * grid.r_half ** (2.0 - params.alpha))
    return lhs, rhs


def diffusion_gap(wave_traj: Sequence[WaveState], heat_traj: Sequence[HeatState],
                  grid: RadialGrid, params: ModelParams, gamma: float | None = None,
                  heat_grid: RadialGrid | None = None):
    """||u(t) - e^{tL}[u0 + r^alpha u1]||_{L^2_dmu} at each common sample.

    Returns (t, D, D * (1+t)^((gamma-alpha)/(2(2-alpha)))) triples; the
    normalized column is nan when gamma is not given.
    """
    if heat_grid is not None and not grid.same_as(heat_grid):
        raise ValueError("wave and heat trajectories live on different grids")
    if len(wave_traj) != len(heat_traj):
        raise ValueError("trajectories have different sample counts")
    out = []
    for ws, hs in zip(wave_traj, heat_traj):
        if ws.u.shape != hs.v.shape:
            raise ValueError("wave and heat fields have different grid sizes")
        if not np.isclose(ws.t, hs.t, atol=1e-9):
            raise ValueError(f"sample times differ: {ws.t} vs {hs.t}")
        d = l2_dmu_norm(ws.u - hs.v, grid)
        if gamma is None:
            norm = float("nan")
        else:
            norm = d * (1.0 + ws.t) ** ((gamma - params.alpha) / (2.0 * (2.0 - params.alpha)))
        out.append((ws.t, d, norm))
    return out


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    residual: float
    n: int


def fit_decay_rate(series, window: tuple[float, float]) -> DecayFit:
    """Least-squares slope of log(value) against log(t) inside the window."""
    arr = np.asarray([(t, v) for t, v in series], dtype=float)
    lo, hi = window
    sel = arr[(arr[:, 0] >= lo) & (arr[:, 0] <= hi)]
    if len(sel) < 2:
        raise ValueError(f"need at least two samples in window {window}")
    if np.any(sel[:, 1] <= 0):
        raise ValueError("fit_decay_rate needs positive values inside the window")
    x, y = np.log(sel[:, 0]), np.log(sel[:, 1])
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    rms = float(np.sqrt(res[0] / len(x))) if len(res) else 0.0
    return DecayFit(float(slope), float(intercept), rms, len(x))


def windowed_growth_ratio(series, window: tuple[float, float]) -> float:
    """max over the last quarter of the window / max over the first quarter."""
    arr = np.asarray([(t, v) for t, v in series], dtype=float)
    lo, hi = window
    q = 0.25 * (hi - lo)
    first = arr[(arr[:, 0] >= lo) & (arr[:, 0] <= lo + q), 1]
    last = arr[(arr[:, 0] >= hi - q) & (arr[:, 0] <= hi), 1]
    if not len(first) or not len(last):
        raise ValueError(f"no samples in the quarter windows of {window}")
    return float(np.max(last) / np.max(first))


@dataclass(frozen=True)
class DataNorms:
    e0: float
    e1: float
    low: float


def data_norms(data: InitialData | tuple, params: ModelParams, grid: RadialGrid, gamma: float) -> DataNorms:
    """E0 = int (|grad u0|^2 + u1^2) r^gamma, E1 = int (|grad u1|^2 + u2^2) r^(gamma+2),
    low = int u0^2 r^-alpha."""
    lo, hi = params.alpha, params.dim + 2 - 2 * params.alpha
    if not lo <= gamma < hi:
        warnings.warn(f"gamma={gamma} outside [{lo:g}, {hi:g})", stacklevel=2)
    u0, u1 = data.sample(grid) if isinstance(data, InitialData) else data
    u2 = second_time_data((u0, u1), params, grid)
    rh, r = grid.r_half, grid.r
    e0 = grid.integrate_half(grid.gradient(u0) ** 2 * rh ** gamma) + grid.integrate(u1 ** 2 * r ** gamma)
    e1 = (grid.integrate_half(grid.gradient(u1) ** 2 * rh ** (gamma + 2))
          + grid.integrate(u2 ** 2 * r ** (gamma + 2)))
    low = grid.integrate_mu(u0 ** 2)
    return DataNorms(e0, e1, low)


@dataclass
class EnergyRecord:
    t: float
    e_dx: float
    e_dt: float
    e_a: float
    e_phi: float
    e_star: float
    dissip: float

    def as_dict(self) -> dict:
        return asdict(self)


class EnergyTracker:
    """Accumulates the dissipation integral int_0^t E_a^beta[t0, d_t w](s) ds.

    Fed every time step (trapezoid rule in time); ``record`` evaluates the
    remaining functionals at the current state. ``order=1`` tracks the
    energies of d_t u instead of u.
    """

    def __init__(self, beta: float, t0: float, grid: RadialGrid, params: ModelParams,
                 lam: float | None = None, order: int = 0):
        self.beta, self.t0, self.grid, self.params = beta, t0, grid, params
        self.lam = beta - 1.0 if lam is None else lam
        self.order = order
        self.dissip = 0.0
        self._last: tuple[float, float] | None = None
        rpart = grid.r ** (2.0 - params.alpha) / (2.0 - params.alpha) ** 2
        self._psi_base = t0 + rpart
        self._aw = grid.w_mu

    def _fields(self, state: WaveState):
        if self.order == 0:
            return state.u, state.ut
        from .wave import time_second_derivative
        return state.ut, time_second_derivative(state, self.grid)

    def feed(self, state: WaveState) -> None:
        _, w_t = self._fields(state)
        val = float(self._aw @ (w_t ** 2 * (self._psi_base + state.t) ** self.beta))
        if self._last is not None:
            t_prev, v_prev = self._last
            self.dissip += 0.5 * (state.t - t_prev) * (val + v_prev)
        self._last = (state.t, val)

    def record(self, state: WaveState) -> EnergyRecord:
        g, p = self.grid, self.params
        w, w_t = self._fields(state)
        view = WaveState(w, w_t, state.t)
        e_dx = energy_dx(self.beta, self.t0, view, g, p)
        e_dt = energy_dt(self.beta, self.t0, view, g, p)
        e_a = energy_a(self.beta, self.t0, w, g, p, t=state.t)
        try:
            e_phi = energy_phi(self.lam, self.t0, view, g, p)
        except RegimeError:
            e_phi = float("nan")
        e_star = energy_star(self.lam, self.t0, view, g, p)
        return EnergyRecord(state.t, e_dx, e_dt, e_a, e_phi, e_star, self.dissip)
