"""Report writers: energies CSV, text summary, gnuplot files, field checkpoints."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .diagnostics import fit_decay_rate, windowed_growth_ratio
from .experiment import ExperimentConfig, RunResult, Sample, simulate
from .grid import RadialGrid

__all__ = [
    "CSV_COLUMNS",
    "ExperimentError",
    "run_experiment",
    "run_sweep",
    "sweep_configs",
    "format_float",
    "write_wave_checkpoint",
    "write_heat_checkpoint",
    "summarize",
]

CSV_COLUMNS = ("t", "e_dx", "e_dt", "e_a", "e_phi", "e_star", "dissip", "D", "D_normalized")


class ExperimentError(RuntimeError):
    """A solver or diagnostics failure, annotated with the run that hit it."""


def format_float(x: float) -> str:
    return "%.17g" % x


def _row(sample: Sample) -> str:
    r = sample.record
    values = (r.t, r.e_dx, r.e_dt, r.e_a, r.e_phi, r.e_star, r.dissip, sample.gap, sample.gap_normalized)
    return ",".join(format_float(v) for v in values) + "\n"


def write_wave_checkpoint(path, state, grid: RadialGrid) -> None:
    """CSV with columns r, u, ut."""
    _write_columns(path, ("r", "u", "ut"), (grid.r, state.u, state.ut))


def write_heat_checkpoint(path, state, grid: RadialGrid) -> None:
    """CSV with columns r, v."""
    _write_columns(path, ("r", "v"), (grid.r, state.v))


def _write_columns(path, names, columns) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*columns):
            fh.write(",".join(format_float(v) for v in row) + "\n")


def _fit_line(label: str, series, window) -> str:
    try:
        fit = fit_decay_rate(series, window)
    except ValueError as exc:
        return f"{label}: n/a ({exc})"
    return f"{label}: slope {fit.slope:.4f} (rms residual {fit.residual:.2e}, {fit.n} samples, window [{window[0]:g}, {window[1]:g}])"


def summarize(result: RunResult) -> str:
    cfg = result.config
    alpha = cfg.alpha
    ts = [s.record.t for s in result.samples]
    t_end = ts[-1]
    lines = [
        "# decaylab run summary",
        f"alpha={cfg.alpha:g} dim={cfg.dim} gamma={cfg.gamma:g} beta={cfg.beta:.6g} order={cfg.order}",
        f"t0={cfg.t0:g} t_final={cfg.t_final:g} dr={cfg.dr:g} dt={cfg.time_step:g} ic={cfg.ic}",
        f"grid: r in [{result.grid.r[0]:g}, {result.grid.r_outer:g}], {result.grid.n} interior nodes",
        f"data norms: E0={result.norms.e0:.10g} E1={result.norms.e1:.10g} low={result.norms.low:.10g}",
        f"bound budget: {result.budget:.10g}"
        + (" (includes int u0^2 r^-alpha since gamma < 2 - alpha)" if result.low_order_in_budget else ""),
    ]
    if t_end > 0:
        bounded = [(s.record.t, s.record.e_dx + s.record.e_dt + s.record.dissip) for s in result.samples]
        lo = 4 * cfg.t0 if 4 * cfg.t0 < t_end else 0.0
        try:
            ratio = f"{windowed_growth_ratio(bounded, (lo, t_end)):.6f}"
        except ValueError:
            ratio = "n/a"
        lines.append(f"E_dx + E_dt + dissip: max {max(v for _, v in bounded):.10g}, "
                     f"growth ratio on [{lo:g}, {t_end:g}] = {ratio}")
        window = (t_end / 4, t_end)
        lines.append(_fit_line("unweighted energy", [(s.record.t, s.unweighted) for s in result.samples], window))
        if cfg.heat:
            lines.append(_fit_line("diffusion gap D", [(s.record.t, s.gap) for s in result.samples], window))
            lines.append(_fit_line("heat orbit L2_dmu norm",
                                   [(s.record.t, s.heat_norm) for s in result.samples], window))
            rate = (cfg.dim - alpha) / (2 * (2 - alpha))
            lines.append(f"reference heat rate: -{rate:.6f}; gap normalization exponent "
                         f"{(cfg.gamma - alpha) / (2 * (2 - alpha)):.6f}")
    return "\n".join(lines) + "\n"


_GNUPLOT = """set datafile separator ","
set key autotitle columnhead
set logscale xy
set xlabel "t"
set terminal pngcairo size 900,600
set output "energies.png"
plot "energies.csv" using 1:2 with lines, \\
     "" using 1:3 with lines, \\
     "" using 1:4 with lines, \\
     "" using 1:7 with lines, \\
     "" using 1:8 with lines
"""


def run_experiment(config: ExperimentConfig, checkpoints: bool = False) -> Path:
    """Run one experiment and write its report files into ``config.out``.

    Files: config.txt (canonical form), energies.csv, summary.txt,
    energies.gp, and with ``checkpoints`` one wave/heat CSV per sample.
    Rows are flushed as they are produced, so a failing run leaves the
    completed part of the CSV on disk.
    """
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(config.to_text())
    ckdir = out / "checkpoints"
    if checkpoints:
        ckdir.mkdir(exist_ok=True)

    with open(out / "energies.csv", "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")

        def on_sample(sample):
            fh.write(_row(sample))
            fh.flush()

        def on_state(state, heat_state, grid):
            if checkpoints:
                tag = f"{state.step:09d}"
                write_wave_checkpoint(ckdir / f"wave_{tag}.csv", state, grid)
                if heat_state is not None:
                    write_heat_checkpoint(ckdir / f"heat_{tag}.csv", heat_state, grid)

        try:
            result = simulate(config, on_sample=on_sample, on_state=on_state)
        except Exception as exc:
            fh.flush()
            raise ExperimentError(f"run in {out} failed ({type(exc).__name__}: {exc}); "
                                  f"partial results kept in energies.csv") from exc

    (out / "summary.txt").write_text(summarize(result))
    (out / "energies.gp").write_text(_GNUPLOT)
    return out


def _tag(overrides: dict) -> str:
    return "_".join(f"{k}={v}" for k, v in overrides.items()) or "base"


def sweep_configs(base: ExperimentConfig, grid: dict[str, list[str]]) -> list[ExperimentConfig]:
    """Cartesian product of ``grid`` values applied to ``base``; each gets its own subdirectory."""
    keys = list(grid)
    configs = []
    for values in itertools.product(*(grid[k] for k in keys)):
        overrides = dict(zip(keys, values))
        text = base.to_text() + "".join(f"{k}={v}\n" for k, v in overrides.items())
        cfg = ExperimentConfig.from_text(text)
        configs.append(cfg.replace(out=str(Path(base.out) / _tag(overrides))))
    return configs


def _worker(text: str) -> str:
    return str(run_experiment(ExperimentConfig.from_text(text)))


def thread_cap() -> int:
    env = os.environ.get("DECAYLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(configs: list[ExperimentConfig], workers: int | None = None) -> list[Path]:
    """Run configs in parallel, one process per config, capped by DECAYLAB_THREADS."""
    for cfg in configs:
        cfg.validate()
    workers = min(len(configs), thread_cap() if workers is None else min(workers, thread_cap()))
    texts = [c.to_text() for c in configs]
    if workers <= 1:
        return [Path(_worker(t)) for t in texts]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [Path(p) for p in pool.map(_worker, texts)]
