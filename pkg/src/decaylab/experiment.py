"""Experiment configuration and the trajectory driver behind ``run``/``sweep``."""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .diagnostics import DataNorms, EnergyRecord, EnergyTracker, data_norms
from .grid import InitialData, ModelParams, RadialGrid, build_grid, parse_initial_data
from .heat import HeatStepper, HeatState, asymptotic_profile, l2_dmu_norm
from .wave import collocated_energy, initial_state, iterate_wave

__all__ = ["ExperimentConfig", "RunResult", "Sample", "simulate", "sample_steps"]


@dataclass
class ExperimentConfig:
    alpha: float = 0.0
    dim: int = 3
    r_inner: float = 1.0
    gamma: float = 2.0
    t0: float = 16.0
    t_final: float = 200.0
    dr: float = 0.05
    dt: float = 0.0  # 0 selects dr/2
    ic: str = "bump:center=2,width=0.5,amp=1"
    samples: int = 64
    heat: bool = True
    order: int = 0
    out: str = "out"

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.type in ("float", float):
                setattr(self, f.name, float(value))
            elif f.type in ("int", int):
                setattr(self, f.name, int(value))
            elif f.type in ("bool", bool) and isinstance(value, str):
                setattr(self, f.name, value.strip().lower() in ("1", "true", "yes", "on"))

    # validation ----------------------------------------------------------
    def validate(self) -> "ExperimentConfig":
        ModelParams(self.alpha, self.dim, self.r_inner)
        if self.t0 < 1:
            raise ValueError(f"t0 must be >= 1, got {self.t0}")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")
        lo, hi = self.alpha, self.dim + 2 - 2 * self.alpha
        if not lo <= self.gamma < hi:
            warnings.warn(f"gamma={self.gamma} outside the hypothesis range [{lo:g}, {hi:g})", stacklevel=2)
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.order not in (0, 1):
            raise ValueError("order must be 0 or 1")
        parse_initial_data(self.ic, self.r_inner)
        return self

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.alpha, self.dim, self.r_inner)

    @property
    def beta(self) -> float:
        """Weight exponent gamma/(2-alpha), shifted by 2/(2-alpha) for order 1."""
        return (self.gamma + 2 * self.order) / (2.0 - self.alpha)

    @property
    def time_step(self) -> float:
        return self.dt if self.dt > 0 else 0.5 * self.dr

    # key=value text form -------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in known:
                raise ValueError(f"line {lineno}: expected key=value with key in {sorted(known)}")
            kwargs[key] = value.strip()
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


def sample_steps(config: ExperimentConfig) -> list[int]:
    """t = 0 plus ``samples`` log-spaced times up to t_final, as step indices."""
    dt = config.time_step
    last = int(round(config.t_final / dt))
    if last == 0:
        return [0]
    times = np.geomspace(dt, last * dt, config.samples)
    steps = sorted({0, last, *(int(round(t / dt)) for t in times)})
    return steps


@dataclass
class Sample:
    record: EnergyRecord
    gap: float
    gap_normalized: float
    unweighted: float
    heat_norm: float


@dataclass
class RunResult:
    config: ExperimentConfig
    grid: RadialGrid
    norms: DataNorms
    samples: list[Sample] = field(default_factory=list)

    @property
    def low_order_in_budget(self) -> bool:
        """Whether the bound budget includes int u0^2 r^-alpha (gamma < 2 - alpha)."""
        return self.config.gamma < 2.0 - self.config.alpha

    @property
    def budget(self) -> float:
        extra = self.norms.low if self.low_order_in_budget else 0.0
        return self.norms.e0 + extra


def simulate(config: ExperimentConfig, on_sample=None, data: InitialData | None = None,
             on_state=None) -> RunResult:
    """Run the damped wave (and optionally the comparison heat flow).

    ``on_sample(sample)`` is called as each sample is produced, so callers can
    stream rows to disk; ``on_state(wave_state, heat_state, grid)`` receives
    the raw fields at the same times.
    """
    config.validate()
    params = config.params
    data = parse_initial_data(config.ic, config.r_inner) if data is None else data
    dt = config.time_step
    grid = build_grid(params, data.R_supp - params.r_inner, config.t_final, config.dr, dt)
    steps = sample_steps(config)
    wanted = set(steps)
    result = RunResult(config, grid, data_norms(data, params, grid, config.gamma))

    tracker = EnergyTracker(config.beta, config.t0, grid, params, order=config.order)
    heat_state = None
    stepper = None
    if config.heat:
        profile, _ = asymptotic_profile(data, params, grid)
        heat_state = HeatState(profile, 0.0, 0)
        stepper = HeatStepper(grid, dt)
    expo = (config.gamma - params.alpha) / (2.0 * (2.0 - params.alpha))

    start = initial_state(data, grid, dt)
    for state in iterate_wave(start, grid, steps[-1]):
        tracker.feed(state)
        if stepper is not None and state.step > 0:
            heat_state = stepper(heat_state)
        if state.step not in wanted:
            continue
        record = tracker.record(state)
        if heat_state is not None:
            gap = l2_dmu_norm(state.u - heat_state.v, grid)
            heat_norm = l2_dmu_norm(heat_state.v, grid)
        else:
            gap = heat_norm = float("nan")
        sample = Sample(record, gap, gap * (1.0 + state.t) ** expo,
                        collocated_energy(state, grid), heat_norm)
        result.samples.append(sample)
        if on_state is not None:
            on_state(state, heat_state, grid)
        if on_sample is not None:
            on_sample(sample)
    return result
