"""Named numerical checks grouped into the suites behind ``decaylab verify``.

Each check returns a :class:`CheckResult` carrying the measured value and the
threshold it was compared against, so reports are machine readable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diagnostics import (
    fit_decay_rate,
    hardy_check,
    hardy_check_power,
    windowed_growth_ratio,
)
from .experiment import ExperimentConfig, RunResult, simulate
from .grid import ModelParams, RadialGrid, bump_profile, build_grid, bump_data, polybump_data
from .heat import HeatState, HeatStepper, apply_heat_operator, asymptotic_profile, dmu_inner, l2_dmu_norm
from .special import KummerArgs, ProfileParams, gamma, kummer_m, kummer_u, varphi, varphi_derivatives
from .special import _scaled_asymptotic, _scaled_series
from .wave import initial_state, iterate_wave, staggered_energy, support_growth_excess
from .weights import (
    WeightSpec,
    literal_initial_trace,
    phi_envelope_constants,
    phi_initial_trace,
    phi_time_derivative,
    phi_weight,
)

__all__ = ["CheckResult", "SUITES", "run_suite", "format_result"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    relation: str = "<="
    detail: str = ""


def _le(name, value, threshold, detail=""):
    value = float(value)
    return CheckResult(name, bool(value <= threshold), value, float(threshold), "<=", detail)


def _within(name, value, lo, hi, detail=""):
    value = float(value)
    extra = f"range [{lo:g}, {hi:g}]" + (f"; {detail}" if detail else "")
    return CheckResult(name, bool(lo <= value <= hi), value, float(hi), "in", extra)


def format_result(res: CheckResult) -> str:
    status = "PASS" if res.passed else "FAIL"
    line = f"{status} {res.name} value={res.value:.6g} {res.relation} {res.threshold:.6g}"
    return line + (f" ({res.detail})" if res.detail else "")


# reference settings ---------------------------------------------------------

REF = dict(dim=3, r_inner=1.0, t0=16.0, t_final=200.0, dr=0.05, dt=0.025,
           ic="bump:center=2,width=0.5,amp=1", samples=128)
_RUNS: dict[str, RunResult] = {}


def reference_run(**overrides) -> RunResult:
    """Cached simulation at the reference settings with ``overrides`` applied."""
    config = ExperimentConfig(**{**REF, **overrides})
    key = config.to_text()
    if key not in _RUNS:
        _RUNS[key] = simulate(config)
    return _RUNS[key]


def _series(run: RunResult, getter) -> list[tuple[float, float]]:
    return [(s.record.t, getter(s)) for s in run.samples]


# kummer --------------------------------------------------------------------

PROFILE_CASES = [(3, 0.0), (3, 0.5), (2, 0.5)]


def check_gamma() -> CheckResult:
    xs = np.linspace(0.1, 50.0, 997)
    err = max(abs(gamma(x) / math.gamma(x) - 1.0) for x in xs)
    return _le("kummer.gamma_rel_error", err, 1e-12, "x in [0.1, 50] vs math.gamma")


def check_phi_zero() -> CheckResult:
    s = np.linspace(0.0, 100.0, 2001)
    err = max(np.max(np.abs(varphi(ProfileParams(a, n, 0.0), s) - 1.0)) for n, a in PROFILE_CASES)
    return _le("kummer.phi0_identity", err, 1e-12, "s in [0, 100]")


def check_phi_exponential() -> CheckResult:
    s = np.linspace(0.0, 100.0, 2001)
    err = 0.0
    for n, a in PROFILE_CASES:
        p = ProfileParams(a, n, 0.0)
        p = p.with_beta(p.cexp)
        err = max(err, float(np.max(np.abs(varphi(p, s) / np.exp(-s) - 1.0))))
    return _le("kummer.phi_cexp_identity", err, 1e-12, "relative, s in [0, 100]")


def _grid_s():
    return np.geomspace(1e-3, 50.0, 400)


def check_ode_residual() -> CheckResult:
    s = _grid_s()
    worst = 0.0
    for n, a in PROFILE_CASES:
        for beta in (-1.0, 0.5, 1.0, 2.0):
            p = ProfileParams(a, n, beta)
            f, d1, d2 = varphi_derivatives(p, s, order=2)
            res = np.abs(s * d2 + (p.cexp + s) * d1 + beta * f) / (1.0 + np.abs(f))
            worst = max(worst, float(np.max(res)))
    return _le("kummer.ode_residual", worst, 1e-8, "beta in {-1, 0.5, 1, 2}, s in [1e-3, 50]")


def check_recurrence() -> CheckResult:
    s = _grid_s()
    worst = 0.0
    for n, a in PROFILE_CASES:
        for beta in (-1.0, 0.5, 1.0, 2.0):
            p = ProfileParams(a, n, beta)
            f, d1 = varphi_derivatives(p, s, order=1)
            g = varphi(p.with_beta(beta + 1.0), s)
            res = np.abs(beta * f + s * d1 - beta * g) / (1.0 + np.abs(f))
            worst = max(worst, float(np.max(res)))
    return _le("kummer.recurrence", worst, 1e-10, "beta phi + s phi' = beta phi_{beta+1}")


def check_m_asymptotic() -> CheckResult:
    s = 200.0
    worst = 0.0
    for b, c in ((1.0, 3.0), (1.5, 2.5)):
        # compare in log space: M itself is ~e^200
        log_m = math.log(kummer_m(KummerArgs(b, c), s) / math.exp(s / 2)) + s / 2
        log_ref = math.lgamma(c) - math.lgamma(b) + (b - c) * math.log(s) + s
        worst = max(worst, abs(math.expm1(log_m - log_ref)))
    return _le("kummer.m_asymptotic_ratio", worst, 0.01, "s=200, (b,c) in {(1,3), (1.5,2.5)}")


def check_u_asymptotic() -> CheckResult:
    s = 200.0
    worst = max(abs(kummer_u(KummerArgs(b, c), s) * s ** b - 1.0) for b, c in ((1.0, 3.0), (1.5, 2.5)))
    return _le("kummer.u_asymptotic_ratio", worst, 0.01, "s=200")


def check_channel_agreement() -> CheckResult:
    s = np.linspace(35.0, 45.0, 101)
    worst = 0.0
    for n, a in PROFILE_CASES:
        for beta in (-1.0, 0.5, 1.0, 2.0):
            p = ProfileParams(a, n, beta)
            k = p.kummer
            ser = _scaled_series(k.b, k.c, s, 0)[0]
            asy = _scaled_asymptotic(k.b, k.c, s, 0)[0]
            worst = max(worst, float(np.max(np.abs(ser / asy - 1.0))))
    return _le("kummer.series_vs_asymptotic", worst, 1e-6, "s in [35, 45]")


# weights -------------------------------------------------------------------

def check_time_derivative() -> CheckResult:
    worst = 0.0
    h = 1e-3
    for beta, n, a, r, t in ((1.5, 3, 0.0, 1.0, 1.0), (0.7, 3, 0.5, 2.0, 1.5), (-0.5, 2, 0.25, 3.0, 2.0)):
        spec = WeightSpec(beta, 0.0, a, n)
        f = lambda tt: phi_weight(spec, r, tt)
        fd = (-f(t - 3 * h) + 9 * f(t - 2 * h) - 45 * f(t - h)
              + 45 * f(t + h) - 9 * f(t + 2 * h) + f(t + 3 * h)) / (60 * h)
        exact = phi_time_derivative(spec, r, t)
        worst = max(worst, abs(fd / exact - 1.0))
    return _le("weights.dphi_dt_vs_fd", worst, 1e-8, "6th-order central difference, step 1e-3")


def check_scaling(n_samples: int = 200, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        a = rng.uniform(0.0, 0.9)
        n = int(rng.integers(2, 5))
        beta = rng.uniform(-1.0, 2.5)
        r, t, lam = rng.uniform(1.0, 5.0), rng.uniform(0.2, 5.0), rng.uniform(0.5, 3.0)
        spec = WeightSpec(beta, 0.0, a, n)
        lhs = phi_weight(spec, r, t)
        rhs = lam ** ((2 - a) * beta) * phi_weight(spec, lam * r, lam ** (2 - a) * t)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300))
    return _le("weights.scaling_identity", worst, 1e-12, f"{n_samples} random (r, t, lambda, beta)")


def heat_residuals(spec: WeightSpec, t: float, steps=(0.2, 0.1, 0.05, 0.025), r_max: float = 50.0):
    """sup-norm of d_t Phi - r^alpha Delta_h Phi on [1, r_max] for each spacing."""
    params = ModelParams(spec.alpha, spec.dim, 1.0)
    out = []
    for h in steps:
        grid = RadialGrid.uniform(params, r_max, int(round((r_max - 1.0) / h)) - 1)
        f = phi_weight(spec, grid.r, t)
        lap = grid.laplacian(f)[1:-1]
        ri = grid.r[1:-1]
        res = phi_time_derivative(spec, ri, t) - ri ** spec.alpha * lap
        out.append(float(np.max(np.abs(res))))
    return out


def check_heat_residual_order() -> CheckResult:
    orders = []
    for beta, n, a in ((0.7, 3, 0.5), (1.0, 3, 0.0), (0.4, 2, 0.5)):
        res = heat_residuals(WeightSpec(beta, 0.0, a, n), 2.0)
        orders.append(math.log2(res[-2] / res[-1]))
    lo, hi = min(orders), max(orders)
    value = lo if abs(lo - 2) > abs(hi - 2) else hi
    return _within("weights.heat_residual_order", value, 1.8, 2.2,
                   "orders " + ", ".join(f"{o:.3f}" for o in orders))


TRACE_CASE = dict(beta=0.5, t0=0.0, alpha=0.0, dim=3)


def check_trace_literal() -> CheckResult:
    """Compare Phi at t=1e-4 with Gamma(c)/Gamma(c-beta) r^((2-alpha)beta) as literally stated."""
    worst = 0.0
    for spec, r in ((WeightSpec(**TRACE_CASE), 2.0), (WeightSpec(0.4, 0.0, 0.5, 2), 1.5)):
        worst = max(worst, abs(phi_weight(spec, r, 1e-4) / literal_initial_trace(spec, r) - 1.0))
    return _le("weights.initial_trace_literal", worst, 0.005, "formula without the (2-alpha)^(2 beta) factor")


def check_trace_corrected() -> CheckResult:
    worst = 0.0
    for spec, r in ((WeightSpec(**TRACE_CASE), 2.0), (WeightSpec(0.4, 0.0, 0.5, 2), 1.5),
                    (WeightSpec(0.7, 0.0, 0.5, 3), 3.0)):
        worst = max(worst, abs(phi_weight(spec, r, 1e-4) / phi_initial_trace(spec, r) - 1.0))
    return _le("weights.initial_trace", worst, 0.005, "Gamma(c)/Gamma(c-beta) ((2-alpha)^2/r^(2-alpha))^beta")


def check_envelope(n_samples: int = 500, seed: int = 11) -> CheckResult:
    """c <= Phi_beta Psi^beta <= C at random points, with the estimated constants."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for beta, n, a in ((0.5, 3, 0.0), (1.0, 3, 0.5), (-0.5, 2, 0.5)):
        spec = WeightSpec(beta, 0.0, a, n)
        lo, hi = phi_envelope_constants(spec)
        r = rng.uniform(1.0, 100.0, n_samples)
        t = np.exp(rng.uniform(math.log(1e-2), math.log(1e3), n_samples))
        prod = phi_weight(spec, r, t) * (t + r ** (2 - a) / (2 - a) ** 2) ** beta
        worst = max(worst, float(np.max(np.maximum(lo / prod - 1.0, prod / hi - 1.0))))
    return _le("weights.envelope_equivalence", worst, 1e-3, "relative excursion beyond the grid extrema")


# hardy ---------------------------------------------------------------------

HARDY_PARAMS = [ModelParams(0.0, 3), ModelParams(0.5, 3), ModelParams(0.5, 2), ModelParams(0.25, 4)]


def random_smooth_field(rng: np.random.Generator, grid: RadialGrid, r_max: float = 10.0) -> np.ndarray:
    """Sum of 1-4 smooth compactly supported bumps inside (r_inner, r_max)."""
    r_in = grid.params.r_inner
    f = grid.zeros()
    for _ in range(int(rng.integers(1, 5))):
        center = rng.uniform(r_in + 0.3, r_max)
        width = rng.uniform(0.2, min(3.0, center - r_in))
        f += bump_profile(grid.r, center, width, rng.normal())
    f[0] = f[-1] = 0.0
    return f


def hardy_corpus(n_fields: int = 100, seed: int = 2024):
    """Worst lhs/rhs ratio for both Hardy forms over a random corpus."""
    rng = np.random.default_rng(seed)
    grids = {p: RadialGrid.uniform(p, 15.0, 1499) for p in HARDY_PARAMS}
    worst_psi = worst_pow = 0.0
    for k in range(n_fields):
        params = HARDY_PARAMS[k % len(HARDY_PARAMS)]
        grid = grids[params]
        w = random_smooth_field(rng, grid)
        floor = -(params.dim - 2) / (2 - params.alpha)
        lam = rng.uniform(floor + 0.2, 3.0)
        t0 = (1.0, 16.0)[k % 2]
        lhs, rhs = hardy_check(w, lam, t0, grid, params)
        worst_psi = max(worst_psi, lhs / rhs)
        lhs, rhs = hardy_check_power(w, grid, params)
        worst_pow = max(worst_pow, lhs / rhs)
    return worst_psi, worst_pow


def check_hardy() -> list[CheckResult]:
    psi_ratio, pow_ratio = hardy_corpus()
    return [
        _le("hardy.psi_weighted_corpus", psi_ratio, 1.0 + 1e-6, "max lhs/rhs over 100 fields"),
        _le("hardy.power_weight_corpus", pow_ratio, 1.0 + 1e-6, "max lhs/rhs over 100 fields"),
    ]


# solver correctness --------------------------------------------------------

def staggered_increments(alpha: float, damped: bool, t_final: float = 20.0, dr: float = 0.05):
    params = ModelParams(alpha, 3, 1.0)
    data = bump_data(2.0, 0.5)
    grid = build_grid(params, data.R_supp - 1.0, t_final, dr)
    start = initial_state(data, grid, 0.5 * dr, damped=damped)
    energies = [staggered_energy(s, grid) for s in iterate_wave(start, grid, int(round(t_final / (0.5 * dr))))]
    e = np.asarray(energies)
    return np.diff(e) / e[0]


def check_undamped_drift() -> CheckResult:
    inc = staggered_increments(0.0, damped=False)
    return _le("energy.undamped_drift_per_step", np.max(np.abs(inc)), 1e-10, "relative to E(0)")


def check_damped_monotone() -> CheckResult:
    worst = max(float(np.max(staggered_increments(a, damped=True))) for a in (0.0, 0.5))
    return _le("energy.damped_monotone", worst, 1e-12, "max step increment / E(0)")


CONV_DATA = dict(center=3.0, width=1.5, power=6.0)


def wave_self_convergence(alpha: float, levels=(40, 80, 160), t: float = 10.0, r_outer: float = 25.0):
    params = ModelParams(alpha, 3, 1.0)
    data = polybump_data(**CONV_DATA)
    sols = []
    for m in levels:
        dr = 1.0 / m
        grid = RadialGrid.uniform(params, r_outer, int(round((r_outer - 1.0) * m)) - 1)
        start = initial_state(data, grid, 0.5 * dr)
        *_, last = iterate_wave(start, grid, int(round(t / (0.5 * dr))))
        sols.append(last.u)
    errs = [np.max(np.abs(c - f[::2])) for c, f in zip(sols, sols[1:])]
    return [math.log2(e1 / e2) for e1, e2 in zip(errs, errs[1:])]


def heat_self_convergence(alpha: float, levels=(40, 80, 160), t: float = 2.0, r_outer: float = 25.0):
    params = ModelParams(alpha, 3, 1.0)
    data = polybump_data(**CONV_DATA, vel=1.0)
    sols = []
    for m in levels:
        dr = 1.0 / m
        grid = RadialGrid.uniform(params, r_outer, int(round((r_outer - 1.0) * m)) - 1)
        f, _ = asymptotic_profile(data, params, grid)
        stepper = HeatStepper(grid, 0.5 * dr)
        state = HeatState(f, 0.0)
        for _ in range(int(round(t / (0.5 * dr)))):
            state = stepper(state)
        sols.append(state.v)
    errs = [np.max(np.abs(c - f[::2])) for c, f in zip(sols, sols[1:])]
    return [math.log2(e1 / e2) for e1, e2 in zip(errs, errs[1:])]


def check_convergence() -> list[CheckResult]:
    out = []
    for label, fn in (("wave", wave_self_convergence), ("heat", heat_self_convergence)):
        orders = [o for a in (0.0, 0.5) for o in fn(a)[-1:]]
        value = min(orders, key=lambda o: -abs(o - 2.0))
        out.append(_within(f"energy.{label}_self_convergence_order", value, 1.8, 2.2,
                           "alpha 0, 0.5: " + ", ".join(f"{o:.3f}" for o in orders)))
    return out


def propagation_profile(alpha: float = 0.5, t_final: float = 50.0, dr: float = 0.05, every: float = 0.5):
    """Finite-propagation diagnostics along one damped run with dt = dr/2.

    Returns a dict with
      stencil_excess: max of supp(t) - (supp(0) + (steps + 1) dr), exact support;
      edge: max |u|, |u_t| on the last two nodes of the build_grid grid;
      cone_excess: max of supp(t) - (R_supp + t + 2 dr), support taken at
          1e-12 of the current sup norm;
      leak: max energy fraction beyond R_supp + t + 2 dr.
    """
    params = ModelParams(alpha, 3, 1.0)
    data = bump_data(2.0, 0.5, vel=1.0)
    dt = 0.5 * dr
    grid = build_grid(params, data.R_supp - 1.0, t_final, dr, dt)
    start = initial_state(data, grid, dt)
    stride = int(round(every / dt))
    out = dict(stencil_excess=-math.inf, edge=0.0, cone_excess=-math.inf, leak=0.0)
    sampled = []
    for st in iterate_wave(start, grid, int(round(t_final / dt))):
        out["edge"] = max(out["edge"], float(np.max(np.abs(st.u[-2:]))), float(np.max(np.abs(st.ut[-2:]))))
        if st.step % stride:
            continue
        sampled.append(st)
        cone = data.R_supp + st.t + 2 * dr
        floor = 1e-12 * float(np.max(np.abs(st.u)))
        out["cone_excess"] = max(out["cone_excess"], grid.support_radius(st.u, floor) - cone)
        density = grid.w_vol * st.ut ** 2
        density[:-1] += grid.w_half * grid.gradient(st.u) ** 2
        out["leak"] = max(out["leak"], float(density[grid.r > cone].sum() / density.sum()))
    out["stencil_excess"] = support_growth_excess(sampled, grid)
    return out


def check_propagation() -> list[CheckResult]:
    coarse = {a: propagation_profile(a) for a in (0.0, 0.5)}
    fine = {a: propagation_profile(a, dr=0.025) for a in (0.0, 0.5)}
    runs = list(coarse.values()) + list(fine.values())
    refine = max(fine[a]["leak"] / coarse[a]["leak"] for a in coarse)
    return [
        _le("energy.support_stencil_bound", max(r["stencil_excess"] for r in runs), 0.0,
            "support grows by at most one node per step"),
        _le("energy.outer_truncation_exact_zero", max(r["edge"] for r in runs), 0.0,
            "max |u|, |u_t| on the last two nodes"),
        _le("energy.support_within_light_cone", max(r["cone_excess"] for r in runs), 0.0,
            "distance past R_supp + t + 2 dr; dispersive precursor of the explicit scheme"),
        _le("energy.cone_leak_refinement_ratio", refine, 0.8,
            "energy beyond the cone at dr/2 over dr"),
    ]


def check_heat_operator(seed: int = 5) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    sym = nonpos = 0.0
    for params in (ModelParams(0.0, 3), ModelParams(0.5, 3), ModelParams(0.5, 2)):
        grid = RadialGrid.uniform(params, 40.0, 799)
        for _ in range(10):
            f, g = grid.zeros(), grid.zeros()
            f[1:-1] = rng.normal(size=grid.n)
            g[1:-1] = rng.normal(size=grid.n)
            lf, lg = apply_heat_operator(f, grid), apply_heat_operator(g, grid)
            scale = math.sqrt(dmu_inner(lf, lf, grid) * dmu_inner(g, g, grid))
            sym = max(sym, abs(dmu_inner(lf, g, grid) - dmu_inner(f, lg, grid)) / scale)
            nonpos = max(nonpos, dmu_inner(lf, f, grid) / math.sqrt(dmu_inner(lf, lf, grid) * dmu_inner(f, f, grid)))
    return [
        _le("energy.heat_operator_symmetry", sym, 1e-12, "relative, dmu inner product"),
        _le("energy.heat_operator_nonpositive", nonpos, 1e-12, "max <Lf, f>/(|Lf| |f|)"),
    ]


# theorem proxies ------------------------------------------------------------

def bounded_functional(run: RunResult):
    return _series(run, lambda s: s.record.e_dx + s.record.e_dt + s.record.dissip)


def check_weighted_boundedness() -> list[CheckResult]:
    out = []
    t0 = REF["t0"]
    for alpha in (0.0, 0.5):
        for beta in (1.0, 2.0):
            run = reference_run(alpha=alpha, gamma=beta * (2 - alpha), heat=False)
            ratio = windowed_growth_ratio(bounded_functional(run), (4 * t0, REF["t_final"]))
            out.append(_le(f"energy.weighted_growth_ratio[alpha={alpha:g},beta={beta:g}]", ratio, 1.1,
                           f"window [{4 * t0:g}, {REF['t_final']:g}]"))
            slope = fit_decay_rate(_series(run, lambda s: s.unweighted), (50.0, 200.0)).slope
            out.append(_le(f"energy.unweighted_slope[alpha={alpha:g},beta={beta:g}]", slope,
                           -beta + 0.15, "fit on [50, 200]"))
    return out


def check_dissipation() -> CheckResult:
    worst = 0.0
    for alpha in (0.0, 0.5):
        run = reference_run(alpha=alpha, gamma=2.0 - alpha, heat=False)
        d = np.asarray([s.record.dissip for s in run.samples])
        worst = max(worst, float(-np.min(np.diff(d))))
    return _le("energy.dissipation_nondecreasing", worst, 0.0, "max decrease between samples")


def check_first_order_energies() -> list[CheckResult]:
    out = []
    for alpha in (0.0, 0.5):
        run = reference_run(alpha=alpha, gamma=2.0 - alpha, order=1, heat=False)
        ratio = windowed_growth_ratio(bounded_functional(run), (4 * REF["t0"], REF["t_final"]))
        out.append(_le(f"energy.time_derivative_growth_ratio[alpha={alpha:g}]", ratio, 1.1,
                       "energies of d_t u with exponent (gamma+2)/(2-alpha)"))
    return out


def cutoff_sensitivity(power: float = 5.0, cutoffs=(20.0, 40.0), t: float = 100.0, alpha: float = 0.0):
    """Max relative change of each energy at time t when the tail cutoff is doubled."""
    records = []
    for cutoff in cutoffs:
        run = reference_run(alpha=alpha, gamma=2.0 - alpha, t_final=t, heat=False,
                            ic=f"polytail:power={power:g},cutoff={cutoff:g}")
        records.append(run.samples[-1].record)
    a, b = records
    names = ("e_dx", "e_dt", "e_a", "e_phi", "e_star", "dissip")
    return {n: abs(getattr(b, n) - getattr(a, n)) / abs(getattr(a, n)) for n in names}


def check_cutoff() -> CheckResult:
    changes = cutoff_sensitivity()
    worst = max(changes, key=changes.get)
    return _le("energy.tail_cutoff_stability", changes[worst], 0.01,
               f"cutoff 20 vs 40, power 5, t=100; worst column {worst}")


# diffusion -----------------------------------------------------------------

def check_gap() -> list[CheckResult]:
    out = []
    for vel in (0.0, 1.0):
        run = reference_run(alpha=0.0, gamma=2.0, ic=f"bump:center=2,width=0.5,amp=1,vel={vel:g}")
        norm = _series(run, lambda s: s.gap_normalized)
        out.append(_le(f"diffusion.normalized_gap_growth_ratio[vel={vel:g}]",
                       windowed_growth_ratio(norm, (10.0, 200.0)), 1.2, "window [10, 200]"))
        slope = fit_decay_rate(_series(run, lambda s: s.gap), (10.0, 200.0)).slope
        out.append(_le(f"diffusion.gap_slope[vel={vel:g}]", slope, -0.4, "fit on [10, 200]"))
    return out


def check_heat_rate() -> list[CheckResult]:
    out = []
    for alpha in (0.0, 0.5):
        run = reference_run(alpha=alpha, gamma=2.0, ic="bump:center=2,width=0.5,amp=1,vel=1")
        slope = fit_decay_rate(_series(run, lambda s: s.heat_norm), (20.0, 200.0)).slope
        rate = (3 - alpha) / (2 * (2 - alpha))
        out.append(_le(f"diffusion.heat_norm_slope[alpha={alpha:g}]", slope, -rate + 0.1,
                       f"fit on [20, 200], ideal {-rate:.4f}"))
    return out


def heat_orbit(alpha: float, t_final: float = 200.0, dr: float = 0.05, dt: float = 0.025,
               every: float = 1.0, vel: float = 1.0):
    """(grid, [(t, v)]) along the heat flow of the reference bump profile."""
    params = ModelParams(alpha, 3, 1.0)
    data = bump_data(2.0, 0.5, vel=vel)
    grid = build_grid(params, data.R_supp - 1.0, t_final, dr)
    f, _ = asymptotic_profile(data, params, grid)
    stepper = HeatStepper(grid, dt)
    state = HeatState(f, 0.0)
    stride = int(round(every / dt))
    out = [(0.0, state.v)]
    for _ in range(int(round(t_final / dt))):
        state = stepper(state)
        if state.step % stride == 0:
            out.append((state.t, state.v))
    return grid, out


def check_monotone_functional() -> CheckResult:
    dr, dt = REF["dr"], REF["dt"]
    worst = -math.inf
    for alpha in (0.0, 0.5):
        grid, orbit = heat_orbit(alpha)
        spec = WeightSpec(1.0, REF["t0"], alpha, 3)
        vals = [(t, grid.integrate_mu(v ** 2 / phi_weight(spec, grid.r, t))) for t, v in orbit]
        f0 = vals[0][1]
        slack = 10 * (dt ** 2 + dr ** 2) * f0
        for (ta, fa), (tb, fb) in zip(vals, vals[1:]):
            worst = max(worst, (fb - fa) / (tb - ta) / slack)
    return _le("diffusion.heat_functional_monotone", worst, 1.0,
               "max increase rate in units of 10(dt^2+dr^2)F(0)")


def check_contraction() -> CheckResult:
    worst = -math.inf
    for alpha in (0.0, 0.5):
        grid, orbit = heat_orbit(alpha, t_final=50.0, every=0.025)
        norms = np.asarray([l2_dmu_norm(v, grid) for _, v in orbit])
        worst = max(worst, float(np.max(np.diff(norms) / norms[0])))
    return _le("diffusion.heat_contraction", worst, 0.0, "max step increase of the L2_dmu norm")


def check_sup_decay() -> list[CheckResult]:
    out = []
    for alpha in (0.0, 0.5):
        grid, orbit = heat_orbit(alpha)
        series = [(t, float(np.max(np.abs(v)))) for t, v in orbit if t > 0]
        slope = fit_decay_rate(series, (10.0, 200.0)).slope
        rate = (3 - alpha) / (2 * (2 - alpha))
        out.append(_le(f"diffusion.sup_norm_slope[alpha={alpha:g}]", slope, -0.8 * rate,
                       f"fit on [10, 200]; L2 to Linf rate {-rate:.4f}"))
    return out


# suites --------------------------------------------------------------------

def flatten_results(items) -> list[CheckResult]:
    out = []
    for item in items:
        out.extend(item if isinstance(item, list) else [item])
    return out


SUITES: dict[str, list[Callable[[], CheckResult | list[CheckResult]]]] = {
    "kummer": [check_gamma, check_phi_zero, check_phi_exponential, check_ode_residual,
               check_recurrence, check_m_asymptotic, check_u_asymptotic, check_channel_agreement],
    "weights": [check_time_derivative, check_scaling, check_heat_residual_order,
                check_trace_literal, check_trace_corrected, check_envelope],
    "hardy": [check_hardy],
    "energy": [check_undamped_drift, check_damped_monotone, check_convergence, check_propagation,
               check_heat_operator, check_weighted_boundedness, check_dissipation,
               check_first_order_energies, check_cutoff],
    "diffusion": [check_gap, check_heat_rate, check_monotone_functional, check_contraction,
                  check_sup_decay],
}


def run_suite(name: str, on_result=None) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise KeyError(f"unknown suite {name!r}")
    results = []
    for n in names:
        for check in SUITES[n]:
            for res in flatten_results([check()]):
                results.append(res)
                if on_result is not None:
                    on_result(res)
    return results
