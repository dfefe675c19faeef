from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from decaylab.special import (
    GammaPoleError,
    KummerArgs,
    KummerRangeError,
    ProfileParams,
    S_SWITCH,
    gamma,
    kummer_m,
    kummer_m_scaled,
    kummer_u,
    rgamma,
    varphi,
    varphi_derivative,
    varphi_derivatives,
)

# reference values computed offline with mpmath at 40 digits
M_SCALED_TABLE = [
    # b, c, s, exp(-s) M(b, c; s)
    (0.3, 1.7, 5.0, 0.045592680849637842031),
    (-0.7, 2.5, 10.0, -0.00052783450359995479608),
    (1.2, 0.8, 30.0, 4.9559944371321925197),
    (2.5, 1.25, 60.0, 117.4225874449091728),
    (0.5, 1.5, 100.0, 0.0050253847187598528033),
    (-2.5, 1.5, 50.0, -2.0415560327476311858e-7),
    (1.1, 3.3, 39.9, 0.00084278317839683556205),
    (1.1, 3.3, 40.1, 0.00083358825167578340872),
]

U_TABLE = [
    (0.5, 1.5, 0.1, 3.1622776601683792442),
    (1.0, 1.0, 2.0, 0.3613286168882225847),
    (2.5, 0.5, 3.0, 0.01538584215883330599),
    (0.3, 2.2, 10.0, 0.51463771915965906967),
    (1.5, 2.5, 50.0, 0.0028284271247461900976),
    (0.7, -0.5, 1.5, 0.43472852865198118283),
]


class TestGamma:
    def test_one(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-15)

    def test_half(self):
        assert gamma(0.5) == pytest.approx(1.7724538509055160, rel=1e-14)

    def test_four_and_half(self):
        assert gamma(4.5) == pytest.approx(11.631728396567449, rel=1e-13)

    def test_accuracy_range(self):
        for x in np.linspace(0.1, 50.0, 500):
            assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-12)

    def test_reflection(self):
        for x in (-0.5, -1.5, -2.3, -7.9):
            assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -4.0])
    def test_poles(self, x):
        with pytest.raises(GammaPoleError):
            gamma(x)
        assert rgamma(x) == 0.0

    def test_large_argument_no_overflow(self):
        assert gamma(170.5) == pytest.approx(math.gamma(170.5), rel=1e-11)


class TestKummerM:
    def test_equal_parameters_is_exponential(self):
        assert kummer_m(KummerArgs(1.5, 1.5), 2.0) == pytest.approx(7.389056098930650, rel=1e-14)

    def test_terminating_degree_one(self):
        assert kummer_m(KummerArgs(-1.0, 2.0), 3.0) == -0.5

    def test_series_example(self):
        assert kummer_m(KummerArgs(0.5, 1.5), 1.0) == pytest.approx(1.4626517459071816, rel=1e-13)

    @pytest.mark.parametrize("b,c,s,expected", M_SCALED_TABLE)
    def test_scaled_against_reference(self, b, c, s, expected):
        assert kummer_m_scaled(KummerArgs(b, c), s) == pytest.approx(expected, rel=1e-10)

    def test_terminating_polynomial_exact(self):
        # M(-3, 1/2; s) = 1 - 6 s + 4 s^2 - 8/15 s^3
        s = np.array([0.0, 0.5, 3.0, 60.0, 200.0])
        exact = 1 - 6 * s + 4 * s ** 2 - 8 / 15 * s ** 3
        np.testing.assert_allclose(kummer_m(KummerArgs(-3.0, 0.5), s), exact, rtol=1e-14)

    def test_array_matches_scalar(self):
        args = KummerArgs(0.8, 2.1)
        s = np.array([0.0, 1.0, 39.0, 41.0, 150.0])
        arr = kummer_m_scaled(args, s)
        for si, ai in zip(s, arr):
            assert kummer_m_scaled(args, float(si)) == pytest.approx(ai, rel=1e-15)

    def test_overflow_signaled(self):
        with pytest.raises(KummerRangeError):
            kummer_m(KummerArgs(0.5, 1.5), 800.0)

    @pytest.mark.parametrize("c", [0.0, -1.0, -3.0])
    def test_invalid_c(self, c):
        with pytest.raises(ValueError):
            KummerArgs(1.0, c)

    def test_negative_s_rejected(self):
        with pytest.raises(ValueError):
            kummer_m(KummerArgs(1.0, 2.0), -1.0)

    def test_asymptotic_ratio(self):
        s = 200.0
        for b, c in ((1.0, 3.0), (1.5, 2.5)):
            scaled = kummer_m_scaled(KummerArgs(b, c), s)
            ratio = scaled * gamma(b) / (gamma(c) * s ** (b - c))
            assert abs(ratio - 1) < 0.01

    def test_channels_agree_near_switch(self):
        args = KummerArgs(0.45, 1.9)
        below = kummer_m_scaled(args, S_SWITCH - 1e-9)
        above = kummer_m_scaled(args, S_SWITCH + 1e-9)
        assert above == pytest.approx(below, rel=1e-8)


class TestKummerU:
    def test_gamma_integral_case(self):
        assert kummer_u(KummerArgs(2.0, 3.0), 4.0) == pytest.approx(0.0625, rel=1e-12)

    @pytest.mark.parametrize("b,c,s,expected", U_TABLE)
    def test_against_reference(self, b, c, s, expected):
        assert kummer_u(KummerArgs(b, c), s) == pytest.approx(expected, rel=1e-8)

    def test_asymptotic(self):
        value = kummer_u(KummerArgs(1.5, 1.0), 200.0)
        assert value == pytest.approx(200.0 ** -1.5, rel=0.02)

    def test_b_nonpositive(self):
        with pytest.raises(ValueError):
            kummer_u(KummerArgs(0.0, 1.0), 1.0)

    def test_s_nonpositive(self):
        with pytest.raises(ValueError):
            kummer_u(KummerArgs(1.0, 1.0), 0.0)


class TestVarphi:
    def test_beta_zero(self):
        assert varphi(ProfileParams(0.3, 3, 0.0), 5.0) == pytest.approx(1.0, abs=1e-15)

    def test_beta_cexp(self):
        p = ProfileParams(0.0, 3, 1.5)
        assert varphi(p, 3.0) == pytest.approx(math.exp(-3.0), rel=1e-14)

    def test_series_example(self):
        # exp(-1) M(1, 3/2; 1) = sqrt(pi)/2 erf(1)
        assert varphi(ProfileParams(0.0, 3, 0.5), 1.0) == pytest.approx(0.74682413281242702540, rel=1e-13)
        assert varphi(ProfileParams(0.0, 3, 0.5), 1.0) == pytest.approx(math.sqrt(math.pi) / 2 * math.erf(1.0))

    def test_normalization(self):
        for beta in (-1.0, 0.3, 2.0, 5.0):
            assert varphi(ProfileParams(0.5, 3, beta), 0.0) == 1.0

    def test_derivative_examples(self):
        assert varphi_derivative(ProfileParams(0.0, 3, 0.0), 2.0) == pytest.approx(0.0, abs=1e-15)
        assert varphi_derivative(ProfileParams(0.0, 3, 1.5), 1.0) == pytest.approx(-math.exp(-1.0), rel=1e-14)
        p = ProfileParams(0.0, 3, 0.5)
        via_recurrence = (0.5 * varphi(p.with_beta(1.5), 1.0) - 0.5 * varphi(p, 1.0)) / 1.0
        assert varphi_derivative(p, 1.0) == pytest.approx(via_recurrence, rel=1e-12)

    def test_derivative_asymptotic_branch(self):
        p = ProfileParams(0.5, 3, 0.8)
        s, h = 120.0, 1e-3
        fd = (varphi(p, s + h) - varphi(p, s - h)) / (2 * h)
        assert varphi_derivative(p, s) == pytest.approx(fd, rel=1e-6)

    def test_positivity_flag(self):
        assert ProfileParams(0.0, 3, 1.4).positive
        assert not ProfileParams(0.0, 3, 1.5).positive

    @given(st.floats(0.0, 0.95), st.integers(2, 5), st.floats(0.01, 0.99), st.floats(0.0, 1e4))
    def test_positive_below_cexp(self, alpha, dim, frac, s):
        p = ProfileParams(alpha, dim, 0.0)
        p = p.with_beta(frac * p.cexp)
        assert varphi(p, s) > 0.0

    @given(st.floats(0.0, 0.9), st.integers(2, 4), st.floats(-1.0, 2.5), st.floats(1e-3, 50.0))
    def test_ode_residual(self, alpha, dim, beta, s):
        p = ProfileParams(alpha, dim, beta)
        f, d1, d2 = varphi_derivatives(p, s, order=2)
        assert abs(s * d2 + (p.cexp + s) * d1 + beta * f) <= 1e-8 * (1 + abs(f))

    @given(st.floats(0.0, 0.9), st.integers(2, 4), st.floats(-1.0, 2.5), st.floats(1e-3, 300.0))
    def test_recurrence(self, alpha, dim, beta, s):
        p = ProfileParams(alpha, dim, beta)
        f, d1 = varphi_derivatives(p, s, order=1)
        g = varphi(p.with_beta(beta + 1.0), s)
        assert abs(beta * f + s * d1 - beta * g) <= 1e-10 * (1 + abs(f))

    @given(st.floats(0.0, 0.9), st.integers(2, 4), st.floats(0.05, 0.95))
    def test_sandwich_envelope(self, alpha, dim, frac):
        p = ProfileParams(alpha, dim, 0.0)
        beta = frac * p.cexp
        s = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 400)])
        env = varphi(p.with_beta(beta), s) * (1 + s) ** beta
        assert np.all(np.isfinite(env)) and env.min() > 0
