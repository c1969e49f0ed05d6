import numpy as np
import pytest

from sphconv import bochner, group, radial, spherical, transforms
from sphconv import convolution as cv

FHAT_1 = 0.419060385484961498  # standard bump at lam = 1


@pytest.fixture(scope="module")
def pair():
    return radial.bump(1.0), radial.gaussian_truncated(0.5, 1.5)


def test_constant_right_factor(bump):
    one = lambda r: np.ones_like(np.asarray(r, dtype=float))  # noqa: E731
    total = group.haar_integral_polar(bump)
    vals = cv.convolve_radial(bump, one, np.array([0.0, 0.7, 2.0]))
    assert np.allclose(vals, total, rtol=1e-10)


def test_at_identity_is_weighted_integral(pair):
    f, g = pair
    fg = radial.custom(lambda t: f(t) * g(t), f.support_radius)
    assert cv.convolve_radial(f, g, 0.0) == pytest.approx(group.haar_integral_polar(fg), rel=1e-10)


@pytest.mark.parametrize("t", [0.3, 1.1, 2.4])
def test_commutative(pair, t):
    f, g = pair
    assert abs(cv.convolve_radial(f, g, t) - cv.convolve_radial(g, f, t)) < 1e-6


def test_spherical_convolution_at_identity(bump):
    assert cv.spherical_convolution(bump, 1.0, 0.0) == pytest.approx(FHAT_1, rel=1e-10)


def test_trivial_character_gives_haar_integral(bump):
    t = np.array([0.0, 0.5, 1.5, 3.0])
    assert np.allclose(cv.spherical_convolution(bump, -1j, t), group.haar_integral_polar(bump),
                       atol=1e-10)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 1 + 0.5j])
def test_factorization(bump, lam):
    t = np.linspace(0.0, 3.0, 7)
    H = cv.spherical_convolution(bump, lam, t)
    fhat = transforms.spherical_transform(bump, lam)
    assert np.max(np.abs(H - fhat * spherical.phi(lam, t))) < 1e-6 * (1 + abs(fhat))


def test_convolution_field(bump):
    field = cv.convolution_field(bump, 1.0, t_max=2.0, n_nodes=17)
    assert field.t.size == 17
    assert field.factorization_residual(bump) < 1e-6
    assert field.f_ref == bump.name()


def test_linearity(pair):
    f, g = pair
    t = np.array([0.4, 1.6])
    lhs = cv.spherical_convolution(f + 3.0 * g, 1.3, t)
    rhs = cv.spherical_convolution(f, 1.3, t) + 3.0 * cv.spherical_convolution(g, 1.3, t)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_even_in_t_and_lambda(bump):
    t = np.array([0.6, 1.8])
    H = cv.spherical_convolution(bump, 1 + 0.5j, t)
    assert np.allclose(H, cv.spherical_convolution(bump, 1 + 0.5j, -t), atol=1e-14)
    assert np.allclose(H, cv.spherical_convolution(bump, -1 - 0.5j, t), atol=1e-8)


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.5])
def test_identity_suite_real_lambda(bump, lam):
    report = cv.identity_suite_thm41(bump, lam, 1.0)
    names = {r.name for r in report}
    assert {"bound", "dominated_by_imag_part", "dominated_by_xi", "weyl_invariance",
            "casimir", "trivial_character"} <= names
    assert all(r.passed for r in report), report


def test_identity_suite_complex_lambda(bump):
    report = cv.identity_suite_thm41(bump, 1.3 + 0.3j, 1.0)
    assert "dominated_by_xi" not in {r.name for r in report}
    assert all(r.passed for r in report), report


def test_identity_suite_zero_profile():
    report = cv.identity_suite_thm41(radial.zero(), 1.0, 1.0)
    assert all(r.residual == 0.0 for r in report)


@pytest.mark.xfail(strict=True, reason="phi_{Re lam} changes sign; where H_{t,Re lam} f < 0 it "
                                       "cannot dominate |H_{t,lam} f|")
def test_domination_by_real_part(bump):
    lam, t = 2.5, 1.0
    H = cv.spherical_convolution(bump, lam, t)
    assert abs(H) <= np.real(cv.spherical_convolution(bump, lam.real, t)) + 1e-6


@pytest.mark.parametrize("lam", [1.0, 0.0, 1 + 0.5j])
def test_conjugation_identity(bump, lam):
    f = (1 + 1j) * bump if lam != 1.0 else bump
    assert cv.conjugation_identity(f, lam, 0.9) < 1e-8


def test_calculus_field(bump):
    mu1 = bochner.gaussian(1.0)
    mu2 = bochner.atomic([0.7, 0.4j], [0.3, 0.2])
    t = np.array([0.0, 0.8, 2.0])
    f1 = cv.calculus_field(bump, mu1, t)
    assert f1[0] == pytest.approx(transforms.calculus_at_identity(bump, mu1), rel=1e-12)
    f2 = cv.calculus_field(bump, mu2, t)
    assert np.allclose(cv.calculus_field(bump, mu1 + mu2.scaled(2.5), t), f1 + 2.5 * f2, atol=1e-12)
    sym = cv.calculus_field(bump, bochner.atomic([1.2, -1.2], [1.0, 1.0]), t)
    assert np.allclose(sym, cv.calculus_field(bump, bochner.atomic([1.2], [2.0]), t), atol=1e-10)
    assert cv.calculus_field(bump, bochner.SpectralMeasure(), 1.0) == 0


def test_calculus_field_matches_direct_convolutions(bump):
    mu = bochner.atomic([0.8, 1.5], [0.5, 0.25])
    t = 1.2
    direct = sum(w * cv.spherical_convolution(bump, z, t) for z, w in mu.atoms)
    assert abs(cv.calculus_field(bump, mu, t) - direct) < 1e-8


def test_bochner_pairing(bump):
    mu = bochner.quadratic_gaussian()
    lhs, rhs = cv.bochner_pairing_thm44(bump, 1.0, mu, 6.0)
    assert abs(lhs - rhs) < 1e-6 * abs(rhs)
    assert cv.bochner_pairing_thm44(radial.zero(), 1.0, mu, 6.0) == (0, 0)


def test_truncated_phi(bump):
    phiT = cv.truncated_phi(1.0, 5.0)
    r = np.array([0.5, 3.9, 5.0, 6.0])
    vals = phiT(r)
    assert np.allclose(vals[:2], spherical.phi(1.0, r[:2]), atol=1e-12)
    assert np.all(vals[2:] == 0)


def test_plancherel_spherical_convolutions(bump):
    vals = [cv.plancherel_spherical_convolutions(bump, lam) for lam in (0.5, 1.0, 2.0)]
    assert vals[0] == vals[1] == vals[2] == transforms.plancherel_residual(bump)
    assert vals[0] < 1e-3
    assert cv.plancherel_spherical_convolutions(radial.zero(), 1.0) == 0.0
    with pytest.raises(ValueError):
        cv.plancherel_spherical_convolutions(bump, 1 + 0.5j)


def test_continuity_in_lambda(bump):
    lam = np.linspace(0.0, 4.0, 81)
    H = np.array([cv.spherical_convolution(bump, z, 1.0, check=False) for z in lam])
    d = np.abs(np.diff(H))
    local = np.convolve(d, np.ones(5) / 5, mode="same")
    assert np.all(d <= 10 * local + 1e-12)


def test_associativity(pair):
    f, g = pair
    lam = 1.0
    t = np.array([0.3, 1.0, 1.7])
    fg = cv.RadialInterpolant(lambda r: np.real(cv.convolve_radial(f, g, r, check=False)),
                              f.support_radius + g.support_radius, degree=96)
    fg_f = radial.custom(fg, f.support_radius + g.support_radius)
    lhs = cv.spherical_convolution(fg_f, lam, t)
    g_phi = cv.RadialInterpolant(lambda r: cv.spherical_convolution(g, lam, r, check=False),
                                 t.max() + f.support_radius + 1e-9, degree=64)
    rhs = cv.convolve_radial(f, g_phi, t)
    assert np.max(np.abs(lhs - rhs)) < 1e-5
