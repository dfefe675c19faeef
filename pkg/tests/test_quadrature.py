import math

import numpy as np
import pytest

from decaylab.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadratureError, gk15, integrate_adaptive


def test_rule_weights_sum_to_two():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, rel=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, rel=1e-15)
    assert np.count_nonzero(GAUSS_WEIGHTS) == 7
    assert np.allclose(NODES, -NODES[::-1])


@pytest.mark.parametrize("degree", range(0, 23))
def test_kronrod_exact_for_polynomials(degree):
    # 15-point Kronrod extension of 7-point Gauss is exact up to degree 3*7 + 1
    value, _ = gk15(lambda x: x ** degree, 0.0, 1.0)
    assert value == pytest.approx(1.0 / (degree + 1), rel=1e-14)


def test_gauss_error_vanishes_on_low_degree():
    _, err = gk15(lambda x: 3 * x ** 13 - x ** 4 + 2, -1.0, 2.0)
    assert err < 1e-12


def test_adaptive_smooth():
    assert integrate_adaptive(np.exp, 0.0, 3.0) == pytest.approx(math.expm1(3.0), rel=1e-13)


def test_adaptive_endpoint_singularity():
    value = integrate_adaptive(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, rtol=1e-10)
    assert value == pytest.approx(2.0, rel=1e-9)


def test_reports_failure_with_estimate():
    with pytest.raises(QuadratureError) as info:
        integrate_adaptive(lambda x: np.sin(1.0 / (x + 1e-4)), 0.0, 1.0, rtol=1e-14, limit=3)
    assert info.value.achieved > 0
    assert np.isfinite(info.value.estimate)
