from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from decaylab.diagnostics import fit_decay_rate
from decaylab.grid import ModelParams, RadialGrid, bump_data, bump_profile, polybump_data
from decaylab.heat import (
    HeatState,
    HeatStepper,
    apply_heat_operator,
    asymptotic_profile,
    dmu_inner,
    heat_operator,
    l2_dmu_norm,
    run_heat,
    step_heat,
)
from decaylab.verification import heat_orbit, heat_self_convergence
from decaylab.weights import WeightSpec, phi_time_derivative, phi_weight


def _grid(alpha=0.0, dim=3, r_outer=5.0, n=3999):
    return RadialGrid.uniform(ModelParams(alpha, dim, 1.0), r_outer, n)


class TestNorm:
    def test_zero(self):
        g = _grid()
        assert l2_dmu_norm(g.zeros(), g) == 0.0

    @pytest.mark.parametrize("alpha,expected", [(0.0, 24.8925825789446659444705388762),
                                                (0.5, 17.5233053924796486212008793481)])
    def test_bump_against_quadrature_oracle(self, alpha, expected):
        # reference: mpmath quad of bump^2 * 4 pi r^(2 - alpha) over [1.5, 2.5]
        g = _grid(alpha)
        f = bump_profile(g.r, 2.0, 0.5)
        assert l2_dmu_norm(f, g) ** 2 == pytest.approx(expected, rel=1e-6)

    def test_homogeneous(self):
        g = _grid()
        f = bump_profile(g.r, 2.0, 0.5)
        assert l2_dmu_norm(2 * f, g) == pytest.approx(2 * l2_dmu_norm(f, g), rel=1e-15)


class TestProfile:
    def test_u1_zero(self):
        g = _grid(0.5)
        f, norm = asymptotic_profile(bump_data(2.0, 0.5), ModelParams(0.5), g)
        np.testing.assert_array_equal(f, bump_data(2.0, 0.5).sample(g)[0])
        assert norm == pytest.approx(l2_dmu_norm(f, g))

    def test_u0_zero_alpha_zero(self):
        g = _grid()
        u1 = bump_profile(g.r, 2.0, 0.5)
        f, _ = asymptotic_profile((g.zeros(), u1), ModelParams(), g)
        np.testing.assert_array_equal(f[1:-1], u1[1:-1])

    def test_sum(self):
        g = _grid(0.5)
        f, _ = asymptotic_profile(bump_data(2.0, 0.5, vel=1.0), ModelParams(0.5), g)
        b = bump_profile(g.r, 2.0, 0.5)
        np.testing.assert_allclose(f[1:-1], (b + g.r ** 0.5 * b)[1:-1], rtol=1e-15)


class TestOperator:
    def test_matrix_matches_stencil(self):
        g = _grid(0.5, n=99)
        rng = np.random.default_rng(0)
        f = g.zeros()
        f[1:-1] = rng.normal(size=g.n)
        np.testing.assert_allclose(heat_operator(g) @ f[1:-1], apply_heat_operator(f, g)[1:-1], rtol=1e-12)

    @given(st.integers(0, 2 ** 31), st.sampled_from([(0.0, 3), (0.5, 3), (0.5, 2), (0.9, 4)]))
    def test_symmetric_and_nonpositive(self, seed, case):
        alpha, dim = case
        g = _grid(alpha, dim, r_outer=30.0, n=299)
        rng = np.random.default_rng(seed)
        f, h = g.zeros(), g.zeros()
        f[1:-1], h[1:-1] = rng.normal(size=(2, g.n))
        lf, lh = apply_heat_operator(f, g), apply_heat_operator(h, g)
        scale = math.sqrt(dmu_inner(lf, lf, g) * dmu_inner(h, h, g))
        assert abs(dmu_inner(lf, h, g) - dmu_inner(f, lh, g)) <= 1e-12 * scale
        assert dmu_inner(lf, f, g) <= 0.0


class TestStepping:
    def test_zero(self):
        g = _grid(n=99)
        out = step_heat(HeatState(g.zeros(), 0.0), g, ModelParams(), 0.01)
        assert not np.any(out.v) and out.t == 0.01 and out.step == 1

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            HeatStepper(_grid(n=99), 0.0)

    def test_contraction(self):
        grid, orbit = heat_orbit(0.5, t_final=10.0, every=0.025)
        norms = [l2_dmu_norm(v, grid) for _, v in orbit]
        assert np.all(np.diff(norms) <= 0.0)

    def test_run_heat_echo(self):
        g = _grid(n=99)
        f = bump_profile(g.r, 2.0, 0.5)
        states = run_heat(f, g, 1.0, 0.01, sample_times=[0.0, 0.5, 1.0])
        np.testing.assert_array_equal(states[0].v[1:-1], f[1:-1])
        assert states[-1].t == pytest.approx(1.0)

    def test_self_similar_one_step(self):
        """One CN step from Phi(., t) against Phi(., t + dt): O(dt^2 + dr^2) interior error."""
        spec = WeightSpec(0.7, 0.0, 0.5, 3)
        errs = []
        for n, dt in ((199, 0.02), (399, 0.01), (799, 0.005)):
            g = RadialGrid.uniform(ModelParams(0.5, 3, 1.0), 6.0, n)
            v = phi_weight(spec, g.r, 1.0)
            # Dirichlet data are handled by lifting: step the difference from the exact solution
            exact_next = phi_weight(spec, g.r, 1.0 + dt)
            lap_now = apply_heat_operator(v, g)
            lap_next = apply_heat_operator(exact_next, g)
            residual = (exact_next - v) / dt - 0.5 * (lap_now + lap_next)
            errs.append(np.max(np.abs(residual[1:-1])))
        assert errs[-1] < 1e-3
        assert 3.0 < errs[0] / errs[1] < 5.0 and 3.0 < errs[1] / errs[2] < 5.0

    @pytest.mark.parametrize("alpha", [0.0, 0.5])
    def test_self_convergence(self, alpha):
        orders = heat_self_convergence(alpha)
        assert 1.8 <= orders[-1] <= 2.2

    def test_second_order_in_dt(self):
        # the exponential bump is still pre-asymptotic at these dt (stiff modes); use the polynomial bump
        g = _grid(0.5, r_outer=20.0, n=759)
        f, _ = asymptotic_profile(polybump_data(3.0, 1.5, 6, vel=1.0), ModelParams(0.5), g)
        sols = [run_heat(f, g, 2.0, dt)[-1].v for dt in (0.04, 0.02, 0.01)]
        e1, e2 = np.max(np.abs(sols[0] - sols[1])), np.max(np.abs(sols[1] - sols[2]))
        assert 1.8 <= math.log2(e1 / e2) <= 2.2


class TestDecay:
    @pytest.mark.parametrize("alpha", [0.0, 0.5])
    def test_norm_rate(self, alpha):
        grid, orbit = heat_orbit(alpha)
        series = [(t, l2_dmu_norm(v, grid)) for t, v in orbit if t > 0]
        rate = (3 - alpha) / (2 * (2 - alpha))
        assert fit_decay_rate(series, (20.0, 200.0)).slope == pytest.approx(-rate, abs=0.1)

    @pytest.mark.parametrize("alpha", [0.0, 0.5])
    def test_sup_norm_at_least_l2_rate(self, alpha):
        grid, orbit = heat_orbit(alpha)
        series = [(t, float(np.max(np.abs(v)))) for t, v in orbit if t > 0]
        rate = (3 - alpha) / (2 * (2 - alpha))
        assert fit_decay_rate(series, (10.0, 200.0)).slope <= -0.8 * rate

    @pytest.mark.parametrize("alpha", [0.0, 0.5])
    def test_monotone_weighted_functional(self, alpha):
        grid, orbit = heat_orbit(alpha, t_final=100.0)
        spec = WeightSpec(1.0, 16.0, alpha, 3)
        vals = np.array([grid.integrate_mu(v ** 2 / phi_weight(spec, grid.r, t)) for t, v in orbit])
        assert np.all(np.diff(vals) <= 0.0)


def test_time_derivative_consistency_on_grid():
    spec = WeightSpec(0.7, 16.0, 0.5, 3)
    g = _grid(0.5, r_outer=40.0, n=3899)
    lhs = phi_time_derivative(spec, g.r, 0.0)[1:-1]
    rhs = apply_heat_operator(phi_weight(spec, g.r, 0.0), g)[1:-1]
    assert np.max(np.abs(lhs - rhs)) <= 1e-5 * np.max(np.abs(lhs))
