import math

import numpy as np
import pytest

from decaylab.grid import (
    ModelParams,
    RadialGrid,
    build_grid,
    bump_data,
    bump_profile,
    parse_initial_data,
    polybump_data,
    polytail_data,
    smooth_cutoff,
    sphere_area,
)
from decaylab.wave import second_time_data


def test_sphere_area():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi ** 2)


@pytest.mark.parametrize("kwargs", [dict(alpha=1.0), dict(alpha=-0.1), dict(dim=1), dict(dim=2.5), dict(r_inner=0.0)])
def test_model_params_validation(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


@pytest.mark.parametrize("dim,alpha", [(2, 0.0), (3, 0.0), (3, 0.5), (4, 0.25)])
def test_volume_quadrature(dim, alpha):
    grid = RadialGrid.uniform(ModelParams(alpha, dim, 1.0), 3.0, 4096)
    exact = sphere_area(dim) * (3.0 ** dim - 1.0) / dim
    assert grid.integrate(np.ones(grid.n + 2)) == pytest.approx(exact, rel=1e-6)
    assert np.all(grid.w_vol > 0) and np.all(grid.w_mu > 0) and np.all(grid.w_half > 0)


def test_uniform_spacing():
    grid = RadialGrid.uniform(ModelParams(), 11.0, 99)
    assert grid.dr == pytest.approx(0.1)
    np.testing.assert_allclose(np.diff(grid.r), 0.1, rtol=1e-12)


class TestBuildGrid:
    def test_margin(self):
        grid = build_grid(ModelParams(0.0, 3, 1.0), 3.0, 100.0, 0.05)
        assert grid.r_outer >= 104.0 + 0.1 - 1e-12
        assert grid.dr <= 0.05 + 1e-12

    def test_zero_time(self):
        grid = build_grid(ModelParams(0.0, 3, 1.0), 3.0, 0.0, 0.05)
        assert grid.r_outer >= 4.0

    def test_reference_size(self):
        grid = build_grid(ModelParams(0.0, 3, 1.0), 2.0, 200.0, 0.05)
        assert grid.r_outer == pytest.approx(203.1)
        assert grid.n == math.ceil((203.1 - 1) / 0.05) - 1

    def test_stencil_margin_with_dt(self):
        grid = build_grid(ModelParams(0.0, 3, 1.0), 2.0, 200.0, 0.05, dt=0.025)
        assert grid.r_outer == pytest.approx(1 + 2 + 400 + 0.1)

    def test_rejects_coarse(self):
        with pytest.raises(ValueError):
            build_grid(ModelParams(), 1.0, 10.0, 0.3)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            build_grid(ModelParams(), 1.0, -1.0, 0.1)


class TestInitialData:
    def test_bump_vanishes_outside(self):
        r = np.linspace(0, 4, 401)
        f = bump_profile(r, 2.0, 0.5)
        assert np.all(f[(r <= 1.5) | (r >= 2.5)] == 0)
        assert bump_profile(np.array([2.0]), 2.0, 0.5)[0] == pytest.approx(1.0)

    def test_cutoff(self):
        y = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0])
        eta = smooth_cutoff(y)
        assert eta[0] == eta[1] == eta[2] == 1.0
        assert 0 < eta[3] < 1
        assert eta[4] == eta[5] == 0.0

    def test_sample_zeroes_ends(self):
        grid = RadialGrid.uniform(ModelParams(), 5.0, 99)
        u0, u1 = polytail_data(power=2, cutoff=2.0).sample(grid)
        assert u0[0] == u0[-1] == 0 and u1[0] == u1[-1] == 0

    def test_parse_bump(self):
        data = parse_initial_data("bump:center=2,width=0.5,amp=1")
        assert data.family == "bump" and data.R_supp == 2.5
        data = parse_initial_data("bump:center=3,width=1,amp=2,vel=0.5")
        r = np.array([3.0])
        assert data.u1_fn(r)[0] == pytest.approx(1.0)

    def test_parse_polytail(self):
        data = parse_initial_data("polytail:power=3,cutoff=10")
        assert data.family == "polytail" and data.R_supp == 20.0

    def test_parse_polybump(self):
        data = parse_initial_data("polybump:center=3,width=1.5,power=6")
        assert data.R_supp == 4.5
        assert data.u0_fn(np.array([3.0, 3.75]))[1] == pytest.approx(0.75 ** 6)

    @pytest.mark.parametrize("text", ["blob:x=1", "bump:center=2,height=1", "bump:center", "polytail:power=3,cutoff=0.5"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_initial_data(text)

    def test_support_must_be_inside(self):
        with pytest.raises(ValueError):
            bump_data(1.2, 0.5)
        with pytest.raises(ValueError):
            polybump_data(2.0, 1.5)


class TestSecondTimeData:
    def test_zero(self):
        grid = RadialGrid.uniform(ModelParams(), 5.0, 99)
        assert np.all(second_time_data((grid.zeros(), grid.zeros()), ModelParams(), grid) == 0)

    def test_velocity_only(self):
        params = ModelParams(0.5, 3, 1.0)
        grid = RadialGrid.uniform(params, 5.0, 399)
        u1 = bump_profile(grid.r, 2.0, 0.5)
        u2 = second_time_data((grid.zeros(), u1), params, grid)
        np.testing.assert_allclose(u2[1:-1], grid.r[1:-1] ** -0.5 * u1[1:-1], rtol=1e-15)

    def test_laplacian_against_symbolic(self):
        # -(u'' + 2 u'/r) of the bump at r = 1.8, 2.1, 2.3, differentiated with sympy
        expected = {1.8: 10.179010921941216594, 2.1: 9.7842254321829376096, 2.3: 19.509019658868492542}
        params = ModelParams(0.0, 3, 1.0)
        errors = []
        for n in (1999, 3999):
            grid = RadialGrid.uniform(params, 3.0, n)
            u2 = second_time_data(bump_data(2.0, 0.5), params, grid)
            errors.append(max(abs(np.interp(r, grid.r, u2) - v) for r, v in expected.items()))
        assert errors[0] < 2e-3 * 20
        assert 3.0 < errors[0] / errors[1] < 5.0
