import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphconv import group, spherical
from sphconv.spherical import IllConditionedFitError, SingularParameterError

# phi_lam(t) = 2F1(1/2 - i lam/2, 1/2 + i lam/2; 1; -sinh^2 t), evaluated once with mpmath
ORACLE = {
    (0.0, 0.3): 0.9779533982200066,
    (0.0, 1.0): 0.795651695605974,
    (0.0, 2.5): 0.333731352205868,
    (1.0, 0.3): 0.9561531301628906,
    (1.0, 1.0): 0.6150553749710181,
    (1.0, 2.5): 0.0183991211840755,
    (2.5, 0.3): 0.8456705695145755,
    (2.5, 1.0): -0.014261953831885762,
    (2.5, 2.5): 0.050076140020624424,
    (1 + 0.5j, 0.3): 0.9614577291880593 - 0.021738589676647845j,
    (1 + 0.5j, 1.0): 0.6469387331561369 - 0.17457002448466505j,
    (1 + 0.5j, 2.5): -0.039907108685848416 - 0.2257063628282277j,
    (0.3j, 0.3): 0.9799274775396102,
    (0.3j, 1.0): 0.813041086002102,
    (0.3j, 2.5): 0.3766677957893568,
}

strip = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z.imag) <= 1.0)
radii = st.floats(0.0, 3.0, allow_nan=False)


@pytest.mark.parametrize("key", sorted(ORACLE, key=str))
def test_phi_matches_hypergeometric_oracle(key):
    lam, t = key
    assert abs(spherical.phi(lam, t) - ORACLE[key]) < 1e-10


def test_trivial_character():
    assert np.allclose(spherical.phi(-1j, [0.0, 0.7, 2.0, 5.0]), 1.0, atol=1e-10)
    assert np.allclose(spherical.phi(1j, [0.7, 5.0]), 1.0, atol=1e-10)


def test_phi_table_agrees_with_phi():
    lams = np.array([0.0, 1.0, 2.5, 1 + 0.5j])
    ts = np.array([0.3, 1.0, 2.5])
    table = spherical.phi_table(lams, ts)
    for i, lam in enumerate(lams):
        assert np.allclose(table[i], spherical.phi(lam, ts), atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(strip, radii)
def test_weyl_invariance_and_identity(lam, t):
    assert abs(spherical.phi(lam, t) - spherical.phi(-lam, t)) < 1e-10
    assert spherical.phi(lam, 0.0) == 1.0


@settings(max_examples=30, deadline=None)
@given(strip, radii)
def test_conjugation(lam, t):
    assert abs(np.conj(spherical.phi(lam, t)) - spherical.phi(np.conj(lam), t)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.floats(-4.0, 4.0), st.floats(0.05, 3.0))
def test_real_parameters_are_bounded_by_one(lam, t):
    assert abs(spherical.phi(lam, t)) <= 1.0 + 1e-12


@settings(max_examples=20, deadline=None)
@given(strip, st.floats(0.1, 3.0))
def test_bounded_by_imaginary_part(lam, t):
    lam = complex(lam)
    assert abs(spherical.phi(lam, t)) <= spherical.phi(1j * lam.imag, t).real + 1e-10


@pytest.mark.xfail(strict=True, reason="phi_{Re lam} changes sign, so it cannot dominate |phi_lam|")
def test_bounded_by_real_part():
    lam, t = 2.5, 1.0
    assert abs(spherical.phi(lam, t)) <= spherical.phi(lam.real, t).real


def test_boundedness_check():
    assert spherical.boundedness_check(0.5 + 1j)
    assert not spherical.boundedness_check(1.2j)
    ts = np.linspace(0.0, 12.0, 25)
    assert spherical.sup_abs_phi(0.5j, ts) <= 1.0 + 1e-12
    assert spherical.sup_abs_phi(1.5j, ts) > 100.0


def test_xi_bound():
    c, low = spherical.xi_bound_constant(np.linspace(0.0, 10.0, 41))
    assert low >= 1.0 - 1e-10
    assert c < 2.0


def test_functional_equation():
    x = group.k(0.4) @ group.a(0.9) @ group.n(0.3)
    y = group.a(1.2) @ group.k(1.1)
    assert spherical.functional_equation_residual(1.3 + 0.2j, x, y) < 1e-8


@pytest.mark.parametrize("lam", [0.0, 1.0, 1 + 0.5j])
def test_casimir_error_is_second_order(lam):
    r1 = spherical.casimir_residual(lam, 1.0, 1e-2)
    r2 = spherical.casimir_residual(lam, 1.0, 5e-3)
    assert r1 < 1e-3
    assert r2 == pytest.approx(r1 / 4, rel=0.05)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 4.0])
def test_c_function_density_closed_form(lam):
    exact = math.pi * (lam / 2) * math.tanh(math.pi * lam / 2)
    assert spherical.c_function(lam).plancherel_density == pytest.approx(exact, rel=1e-6)


def test_plancherel_density_vectorised():
    lams = np.linspace(0.5, 6.0, 12)
    dens = spherical.plancherel_density(lams)
    assert np.all(np.diff(dens) > 0)
    assert np.allclose(dens, math.pi * lams / 2 * np.tanh(math.pi * lams / 2), rtol=1e-6)


def test_c_function_near_zero_is_ill_conditioned():
    with pytest.raises(IllConditionedFitError):
        spherical.c_function(1e-9)


@pytest.mark.parametrize("lam", [2.0, 1 + 0.5j, 3.0])
def test_series_matches_integral(lam):
    for t in (1.0, 2.0, 4.0):
        assert abs(spherical.hc_series_phi(lam, t) - spherical.phi(lam, t)) < 1e-8


def test_series_recursion_is_satisfied():
    coeffs = spherical.hc_series_coeffs(1.5, 20, spherical.LITERAL)
    assert np.max(coeffs.residuals()) < 1e-12
    assert np.all(coeffs.coeffs[1::2] == 0)


def test_series_singular_parameter():
    with pytest.raises(SingularParameterError):
        spherical.hc_series_coeffs(-2j, 10, spherical.LITERAL)


def test_series_warns_near_identity():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spherical.hc_series_phi(2.0, 0.2, M=80)
    assert any(issubclass(w.category, spherical.ConvergenceWarning) for w in caught)


def test_series_rejects_identity():
    with pytest.raises(ValueError):
        spherical.hc_series_phi(2.0, 0.0)
