"""The verification battery behind ``sphconv verify`` and the acceptance tests.

Each ``criterion_*`` function returns a list of :class:`Case` records; a case
passes when its residual is at most its tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bochner, calibration, convolution, group, radial, spherical, transforms
from .quadrature import DEFAULT_SPEC

DEFAULT_SEED = 20240601


@dataclass
class Case:
    suite: str
    case: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual <= self.tolerance)

    def to_dict(self):
        return {"suite": self.suite, "case": self.case, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


def _lam_str(lam):
    lam = complex(lam)
    return f"{lam.real:g}" if lam.imag == 0 else f"{lam.real:g}{lam.imag:+g}i"


def _random_element(rng, r_max):
    return group.PolarCoords(rng.uniform(0, 2 * math.pi), rng.uniform(0, r_max),
                             rng.uniform(0, 2 * math.pi)).assemble()


# ------------------------------------------------------------------ criteria


def criterion_1(q=DEFAULT_SPEC, rng=None):
    """Quadrature against the Harish-Chandra series, relative 1e-6."""
    out = []
    for lam in (0.5, 1.0, 2.0, 4.0):
        for t in (0.5, 1.0, 2.0, 3.0):
            quad = spherical.phi(lam, t, q)
            ser = spherical.hc_series_phi(lam, t, 40, q=q)
            out.append(Case("1 series", f"lam={lam:g} t={t:g}",
                            abs(ser - quad) / abs(quad), 1e-6))
    return out


def criterion_2(q=DEFAULT_SPEC, rng=None):
    """Functional equation on 20 random triples with radii <= 2."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    out = []
    for i in range(20):
        lam = complex(rng.uniform(0, 4), rng.uniform(-1, 1) if i % 2 else 0.0)
        x, y = _random_element(rng, 2.0), _random_element(rng, 2.0)
        res = spherical.functional_equation_residual(lam, x, y, q)
        out.append(Case("2 functional equation", f"#{i} lam={_lam_str(lam)}", res, 1e-6))
    return out


def criterion_3(q=DEFAULT_SPEC, rng=None, h=1e-3):
    """Radial Casimir equation for phi and for t -> H_{t,lam} f."""
    out = []
    f = radial.bump(1.0)
    for lam in (0.0, 1.0, 2.0):
        for t in (0.5, 1.5):
            out.append(Case("3 casimir", f"phi lam={lam:g} t={t:g}",
                            spherical.casimir_residual(lam, t, h, q), 1e-4))
        H = convolution.spherical_convolution(f, lam, np.array([1.0 - h, 1.0, 1.0 + h]), q)
        out.append(Case("3 casimir", f"H bump lam={lam:g} t=1",
                        spherical.radial_casimir_residual(H, 1.0, h, lam), 1e-4))
    return out


def criterion_4(q=DEFAULT_SPEC, rng=None):
    """H at the identity, conjugation and linearity."""
    out = []
    for f in radial.standard_profiles():
        for lam in (0.5, 1 + 0.5j):
            H = convolution.spherical_convolution(f, lam, 0.0, q)
            fh = transforms.spherical_transform(f, lam, q)
            out.append(Case("4 H at e", f"{f.name()} lam={_lam_str(lam)}", abs(H - fh), 1e-6))
    bump = radial.bump(1.0)
    out.append(Case("4 conjugation", "real bump lam=1",
                    convolution.conjugation_identity(bump, 1.0, 1.0, q), 1e-8))
    out.append(Case("4 conjugation", "(1+i) bump lam=1+0.5i",
                    convolution.conjugation_identity((1 + 1j) * bump, 1 + 0.5j, 1.0, q), 1e-8))
    f1, f2, c = radial.bump(1.2), radial.shell(1.5, 2), 0.7 - 0.3j
    t = np.array([0.0, 0.7, 1.4])
    lhs = convolution.spherical_convolution(f1 + c * f2, 1.3, t, q)
    rhs = (convolution.spherical_convolution(f1, 1.3, t, q)
           + c * convolution.spherical_convolution(f2, 1.3, t, q))
    out.append(Case("4 linearity", "bump + c shell", np.max(np.abs(lhs - rhs)), 1e-10))
    return out


def criterion_5(q=DEFAULT_SPEC, rng=None):
    """Bound, domination, Weyl invariance and the trivial character."""
    out = []
    profiles = radial.standard_profiles()[:3]
    for f in profiles:
        for lam in (1.0, 1 + 0.5j):
            for r in convolution.identity_suite_thm41(f, lam, 1.0, q):
                if r.name in ("casimir", "trivial_character"):
                    continue
                out.append(Case("5 H bounds", f"{r.name} {f.name()} lam={_lam_str(lam)}",
                                r.residual, r.tolerance))
    f = profiles[0]
    total = group.haar_integral_polar(f, q)
    t = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
    H = convolution.spherical_convolution(f, -1j, t, q)
    for tv, hv in zip(t, H):
        out.append(Case("5 H bounds", f"trivial character t={tv:g}", abs(hv - total), 1e-6))
    return out


def criterion_6(q=DEFAULT_SPEC, rng=None):
    """``H_{t,lam} f = f^(lam) phi_lam(t)`` over the field grid."""
    out = []
    for f in radial.standard_profiles():
        for lam in (0.5, 1.0, 2.0, 1 + 0.5j):
            fld = convolution.convolution_field(f, lam, q=q)
            out.append(Case("6 factorization", f"{f.name()} lam={_lam_str(lam)}",
                            fld.factorization_residual(f, q), 1e-6))
    return out


def criterion_7(q=DEFAULT_SPEC, rng=None):
    """Calculus at the identity through the Abel transform; Abel factorization."""
    out = []
    measures = {"atomic pair": bochner.atomic([1.5, -1.5], [0.5, 0.5]),
                "gaussian": bochner.gaussian(1.0),
                "uniform[-2,2]": bochner.uniform(-2.0, 2.0)}
    profiles = radial.standard_profiles()
    for f in profiles[:3]:
        for name, mu in measures.items():
            a = transforms.calculus_at_identity(f, mu, q)
            b = transforms.weighted_abel_at_zero(f, mu, q)
            out.append(Case("7 abel", f"{name} {f.name()}", abs(a - b) / (1 + abs(a)), 1e-6))
    lam = np.linspace(0.0, 6.0, 13)
    for f in profiles:
        fh = transforms.spherical_transform(f, lam, q)
        fa = transforms.fourier_of_abel(f, lam, q)
        out.append(Case("7 abel", f"factorization {f.name()}",
                        np.max(np.abs(fh - fa)) / np.max(np.abs(fh)), 1e-6))
    return out


def criterion_8(q=DEFAULT_SPEC, rng=None):
    """Plancherel constant, Plancherel residual and wave-packet round trip."""
    out = []
    kappa_P = calibration.active().kappa_P
    ks = []
    for f in radial.standard_profiles():
        b = transforms.transform_on_grid(f, q=q)
        t = np.linspace(0.0, f.support_radius, 41)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", transforms.GridTruncationWarning)
            wp = np.real(transforms.wave_packet(b, t, q))
        ft = np.real(f(t))
        ks.append(float(wp[:-5] @ ft[:-5] / (ft[:-5] @ ft[:-5])))
        norm = transforms.l2_norm_sq(f, q)
        res = abs(norm - transforms.plancherel_side(b, q) / kappa_P) / norm
        out.append(Case("8 plancherel", f"residual {f.name()}", res, 1e-3))
        out.append(Case("8 plancherel", f"round trip {f.name()}",
                        np.max(np.abs(wp / kappa_P - ft)), 1e-3))
    out.append(Case("8 plancherel", "kappa_P spread", calibration._spread(ks), 1e-3))
    return out


def criterion_9(q=DEFAULT_SPEC, rng=None):
    """Truncated pairing at T_cut = 6 and the T_cut sweep."""
    f, lam = radial.bump(1.0), 1.0
    mu = bochner.quadratic_gaussian(1.0)
    fh = transforms.spherical_transform(f, lam, q)
    vals = {}
    out = []
    for T_cut in (4.0, 6.0, 8.0):
        lhs, rhs = convolution.bochner_pairing_thm44(f, lam, mu, T_cut, q)
        vals[T_cut] = lhs / fh
        if T_cut == 6.0:
            out.append(Case("9 truncated pairing", "T_cut=6", abs(lhs - rhs) / abs(rhs), 1e-6))
    d1, d2 = abs(vals[6.0] - vals[4.0]), abs(vals[8.0] - vals[6.0])
    out.append(Case("9 truncated pairing", "sweep |A8-A6| < |A6-A4|", d2, d1))
    return out


def _random_profile(rng):
    T1, T2 = rng.uniform(0.6, 1.6, 2)
    c1, c2 = rng.uniform(-1, 1, 2)
    return c1 * radial.bump(float(T1)) + c2 * radial.gaussian_truncated(float(rng.uniform(0.2, 0.6)),
                                                                         float(T2))


def _random_measure(rng):
    kind = rng.integers(3)
    if kind == 0:
        return bochner.gaussian(float(rng.uniform(0.5, 2.0)), n=201)
    if kind == 1:
        a = float(rng.uniform(0.5, 3.0))
        return bochner.uniform(-a, a, n=201)
    locs = [complex(rng.uniform(-3, 3)), 1j * float(rng.uniform(0, 1)), 0.0]
    return bochner.atomic(locs, list(rng.uniform(0.1, 1.0, 3)))


def criterion_10(q=DEFAULT_SPEC, rng=None):
    """Bochner positivity on random pairs; support and growth checks."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    out = []
    for i in range(20):
        mu, f = _random_measure(rng), _random_profile(rng)
        rep = bochner.positive_definiteness_residual(bochner.BochnerFunctional(mu), f, q)
        out.append(Case("10 bochner", f"#{i} agreement",
                        rep.residual / (1 + abs(rep.direct)), 1e-6))
        out.append(Case("10 bochner", f"#{i} Re T[f*f*] >= 0", max(0.0, -rep.direct.real), 1e-10))
    ps = np.linspace(1.0, 2.0, 11)
    bad = 0
    for i in range(10):
        mu = bochner.atomic([1j * float(rng.uniform(0, 1)), float(rng.uniform(-2, 2))])
        passes = [bochner.support_check(mu, p) for p in ps]
        # passing at p must imply passing at every smaller p (wider strip)
        bad += sum(1 for j in range(1, len(ps)) if passes[j] and not passes[j - 1])
    out.append(Case("10 bochner", "support_check monotone in p", bad, 0))
    grid = np.linspace(-40, 40, 4001)
    poly = lambda x: 1 + x ** 2  # noqa: E731
    checks = [(bochner.atomic([0.5j, 2.0], [1.0, 2.0]), True),
              (bochner.from_density(poly, grid, (4, 10.0)), True),
              (bochner.from_density(poly, grid, (1, 10.0)), False)]
    wrong = sum(1 for mu, expect in checks if bochner.growth_check(mu)[0] != expect)
    out.append(Case("10 bochner", "growth_check matches certificates", wrong, 0))
    return out


def criterion_11(q=DEFAULT_SPEC, rng=None):
    """Iwasawa to polar Haar ratio across the standard profiles."""
    ratios = [group.haar_integral_iwasawa(f, q) / group.haar_integral_polar(f, q)
              for f in radial.standard_profiles()]
    out = [Case("11 haar", "kappa_H spread", calibration._spread(ratios), 1e-4)]
    out.append(Case("11 haar", "kappa_H vs calibration",
                    abs(np.mean(ratios) / calibration.active().kappa_H - 1), 1e-4))
    return out


def criterion_12(q=DEFAULT_SPEC, rng=None):
    """c-function from two fitting windows; evenness of the Plancherel density."""
    lam = np.linspace(0.5, 6.0, 12)
    out = []
    worst = 0.0
    for l in lam:
        a = spherical.c_function(l, (8.0, 9.0), q).c
        b = spherical.c_function(l, (10.0, 11.5), q).c
        worst = max(worst, abs(a - b) / abs(a))
    out.append(Case("12 c-function", "two windows on [0.5, 6]", worst, 1e-3))
    dp = spherical.plancherel_density(lam, q=q)
    dm = spherical.plancherel_density(-lam, q=q)
    out.append(Case("12 c-function", "|c|^-2 even", np.max(np.abs(dp - dm) / dp), 1e-8))
    return out


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_all(q=DEFAULT_SPEC, seed=DEFAULT_SEED, tol=None, criteria=None):
    """Run the battery; ``tol`` (if given) replaces every tolerance."""
    cases = []
    for i in criteria or sorted(CRITERIA):
        rng = np.random.default_rng([seed, i])
        for c in CRITERIA[i](q, rng):
            if tol is not None:
                c = Case(c.suite, c.case, c.residual, tol)
            cases.append(c)
    return cases
