import math

import numpy as np
import pytest

from sphconv.quadrature import (DEFAULT_SPEC, NonConvergenceError, QuadratureSpec,
                                check_doubling, gauss_legendre, smooth_cutoff)


def test_gauss_legendre_integrates_polynomials_exactly():
    x, w = gauss_legendre(-1.0, 2.0, 32)
    assert np.sum(w * x ** 31) == pytest.approx((2.0 ** 32 - 1.0) / 32, rel=1e-13)


def test_gauss_legendre_rounds_up_to_whole_panels():
    x, w = gauss_legendre(0.0, 1.0, 20)
    assert x.size == 32
    assert np.sum(w) == pytest.approx(1.0, abs=1e-15)


def test_gauss_legendre_smooth_integral():
    x, w = gauss_legendre(0.0, math.pi, 64)
    assert np.sum(w * np.sin(x)) == pytest.approx(2.0, abs=1e-14)


def test_smooth_cutoff_shape():
    x = np.linspace(0, 1.2, 121)
    c = smooth_cutoff(x)
    assert np.all(c[x <= 0.8] == 1.0)
    assert np.all(c[x >= 1.0] == 0.0)
    assert np.all(np.diff(c) <= 0)
    assert smooth_cutoff(0.9) == pytest.approx(0.5)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(n_t=4)
    with pytest.raises(ValueError):
        QuadratureSpec(t_max=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0.0)


def test_spec_refined_doubles_counts():
    r = DEFAULT_SPEC.refined()
    assert (r.n_theta, r.n_t, r.n_u) == (2 * DEFAULT_SPEC.n_theta, 2 * DEFAULT_SPEC.n_t,
                                         2 * DEFAULT_SPEC.n_u)
    assert r.tol == DEFAULT_SPEC.tol


def test_check_doubling():
    check_doubling("x", 1.0, 1.0 + 1e-12, 1e-10)
    with pytest.raises(NonConvergenceError) as exc:
        check_doubling("x", 1.0, 1.1, 1e-10)
    assert exc.value.what == "x"
