"""Radial convolution on G and spherical convolutions ``H_{x,lam} f = (f * phi_lam)(x)``.

For radial ``f`` and ``g`` the convolution at polar radius ``t`` is

    (f*g)(a(t)) = int_0^inf f(s) sinh(2s) (2/pi) int_0^{pi/2} g(r) dth ds,
    sinh^2 r = sinh^2(t - s) + sinh(2t) sinh(2s) sin^2 th.

The inner K-average is done with the same mapped trapezoid rule as the
spherical function itself, centred on the scale where ``r`` starts to move;
this keeps it accurate when ``sinh(2t) sinh(2s)`` is large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import spherical
from .quadrature import DEFAULT_SPEC, check_doubling, gauss_legendre, smooth_cutoff
from .radial import RadialFunction
from .transforms import REFINEMENTS, _probe_indices, spherical_transform

FIELD_T_MAX = 3.0
FIELD_NODES = 256


# --------------------------------------------------------------- K-average


def _k_average_nodes(B, A, n):
    """Radii and weights for ``(2/pi) int_0^{pi/2} g(asinh sqrt(B + A sin^2)) dth``.

    Returns arrays of shape ``(len(B), 2n - 1)``.
    """
    B = np.asarray(B, dtype=float)[:, None]
    A = np.asarray(A, dtype=float)[:, None]
    with np.errstate(divide="ignore"):
        s0 = 0.5 * np.log((1.0 + B) / np.where(A > 0, A, 1.0))
    s0 = np.where(A > 0, np.minimum(s0, 0.0), 0.0)
    center = 0.5 * s0
    width = 1.0 - 0.5 * s0
    smax = np.arcsinh((np.abs(center) + 40.0) / width)
    grid = np.linspace(-1.0, 1.0, 2 * n - 1)[None, :]
    sig = smax * grid
    h = smax * (grid[0, 1] - grid[0, 0])
    s = center + width * np.sinh(sig)
    sin2 = 0.5 * (1.0 + np.tanh(s))  # u^2/(1+u^2) with u = e^s
    x = B + A * sin2
    r = np.arcsinh(np.sqrt(x))
    w = (2.0 / math.pi) * h * width * np.cosh(sig) / (2.0 * np.cosh(s))
    return r, w


def _k_node_count(t, T, n_min):
    n = 48 + 12.0 * (t + T)
    return max(int(n_min), 16 * (-(-int(math.ceil(n)) // 16)))


def _convolve_once(f, g, t, n_t, n_k, fine_k):
    s, ws = gauss_legendre(0.0, f.support_radius, n_t)
    fs = f(s)
    keep = fs != 0
    s, ws, fs = s[keep], ws[keep], fs[keep]
    B = np.sinh(t - s) ** 2
    A = np.sinh(2.0 * t) * np.sinh(2.0 * s)
    r, wk = _k_average_nodes(B, A, n_k)
    if not fine_k:
        r, wk = r[:, ::2], 2.0 * wk[:, ::2]
    avg = np.sum(g(r) * wk, axis=1)
    return np.sum(ws * fs * np.sinh(2.0 * s) * avg)


def convolve_radial(f, g, t, q=DEFAULT_SPEC, check=True, n_k=None):
    """``(f * g)(a(t))`` for radial ``f`` (compact support) and a radial map ``g``.

    ``g`` must accept an array of radii up to ``t + f.support_radius``.
    ``t`` may be an array.  With ``check`` a spread of radii (always
    including the largest) is compared against doubled radial and K node
    counts; both counts double, up to ``REFINEMENTS`` times, until they
    agree.  A compactly supported ``g`` needs this, since its support edge
    cuts through the K-average.
    """
    t_arr = np.abs(np.atleast_1d(np.asarray(t, dtype=float))).ravel()
    n_t, n_k = q.n_t, n_k or _k_node_count(float(t_arr.max()), f.support_radius, q.n_theta)

    def run(ts, n_t, n_k, fine_k):
        return np.array([_convolve_once(f, g, tv, n_t, n_k, fine_k) for tv in ts])

    out = run(t_arr, n_t, n_k, False)
    if check:
        idx = _probe_indices(t_arr.astype(complex))
        for k in range(REFINEMENTS + 1):
            fine = run(t_arr[idx], 2 * n_t, n_k, True)
            if k == REFINEMENTS:
                check_doubling("convolve_radial", out[idx], fine, q.tol)
            if np.all(np.abs(out[idx] - fine) <= q.tol * np.maximum(1.0, np.abs(fine))):
                break
            n_t, n_k = 2 * n_t, 2 * n_k
            out = run(t_arr, n_t, n_k, False)
    return complex(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def convolution_function(f, g, q=DEFAULT_SPEC):
    """``f * g`` as a :class:`RadialFunction` (both factors compactly supported)."""
    def profile(t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        vals = convolve_radial(f, g, flat, q, check=False) if flat.size else flat
        return np.asarray(vals).reshape(t.shape)

    return RadialFunction(profile, f.support_radius + g.support_radius, "custom",
                          {"conv": f"{f.name()}*{g.name()}"})


class RadialInterpolant:
    """Chebyshev interpolant of an analytic radial map on ``[0, r_max]``."""

    def __init__(self, func, r_max, degree=64):
        self.r_max = float(r_max)
        x = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
        vals = np.asarray(func(0.5 * self.r_max * (x + 1.0)))
        self.coef = np.polynomial.chebyshev.chebfit(x, vals, degree)

    def __call__(self, r):
        x = 2.0 * np.abs(np.asarray(r, dtype=float)) / self.r_max - 1.0
        return np.polynomial.chebyshev.chebval(x, self.coef)


# ------------------------------------------------------ spherical convolution


def _phi_map(lam, r_max, q):
    return spherical.phi_interpolant(complex(lam), float(r_max), q)


def spherical_convolution(f, lam, t, q=DEFAULT_SPEC, check=True):
    """``H_{t,lam} f = (f * phi_lam)(a(t))`` by two-dimensional quadrature."""
    t_max = float(np.max(np.abs(t)))
    g = _phi_map(lam, t_max + f.support_radius + 1e-9, q)
    return convolve_radial(f, g, t, q, check)


@dataclass(frozen=True)
class ConvolutionField:
    """``t -> H_{t,lam} f`` sampled on a radial grid."""

    lam: complex
    t: np.ndarray
    values: np.ndarray
    f_ref: str
    quadrature: dict = field(default_factory=dict)

    def factorization_residual(self, f, q=DEFAULT_SPEC):
        """``max |H - f^(lam) phi_lam(t)| / (1 + |f^(lam)|)`` over the grid."""
        fhat = spherical_transform(f, self.lam, q)
        pred = fhat * spherical.phi(self.lam, self.t, q)
        return float(np.max(np.abs(self.values - pred)) / (1.0 + abs(fhat)))


def convolution_field(f, lam, t_max=FIELD_T_MAX, n_nodes=FIELD_NODES, q=DEFAULT_SPEC):
    t = np.linspace(0.0, t_max, n_nodes)
    vals = spherical_convolution(f, lam, t, q)
    return ConvolutionField(complex(lam), t, np.asarray(vals, dtype=complex), f.name(),
                            q.to_dict())


# ------------------------------------------------------------ identity suites


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.residual <= self.tolerance)


def identity_suite_thm41(f, lam, t, q=DEFAULT_SPEC, h=1e-3, ode_tol=1e-3, tol=1e-6):
    """Bound, domination, Weyl invariance, Casimir equation and trivial-character
    value of ``H_{t,lam} f``, each as a :class:`CheckResult`.

    Domination is checked for ``f >= 0`` only: by ``H_{t, i Im lam} f`` always
    and by ``H_{t,0} f`` for real ``lam``.  Domination by ``H_{t, Re lam} f``
    is not part of the report since ``phi_{Re lam}`` changes sign.
    """
    from .group import haar_integral_polar

    lam = complex(lam)
    absf = RadialFunction(lambda s: np.abs(f(s)), f.support_radius, "custom", {})
    norm1 = float(np.real(haar_integral_polar(absf, q)))
    ts = np.array([t - h, t, t + h]) if t > h else np.array([t])
    H = lambda mu: np.atleast_1d(spherical_convolution(f, mu, ts, q))  # noqa: E731
    Hl = H(lam)
    H0 = Hl[1] if ts.size == 3 else Hl[0]
    out = [CheckResult("bound", max(0.0, abs(H0) - norm1), tol)]

    probe = f(np.linspace(0.0, f.support_radius, 101))
    if np.all(np.real(probe) >= 0) and not np.any(np.imag(probe)):
        mid = 1 if ts.size == 3 else 0
        refs = [("dominated_by_imag_part", 1j * lam.imag)]
        if lam.imag == 0:
            refs.append(("dominated_by_xi", 0.0))
        for label, mu in refs:
            ref = H(mu)[mid]
            gap = max(0.0, abs(H0) - np.real(ref)) + abs(np.imag(ref))
            out.append(CheckResult(label, gap, tol))

    out.append(CheckResult("weyl_invariance", float(np.max(np.abs(Hl - H(-lam)))), 1e-8))
    if ts.size == 3:
        res = spherical.radial_casimir_residual(Hl, t, h, lam)
        out.append(CheckResult("casimir", res, ode_tol))
    total = haar_integral_polar(f, q)
    out.append(CheckResult("trivial_character", abs(H(-1j)[0] - total), tol))
    return out


def conjugation_identity(f, lam, t, q=DEFAULT_SPEC):
    """``|conj(H_{t,-lam} f) - H_{t,conj lam}(conj f)|``."""
    lam = complex(lam)
    lhs = np.conj(spherical_convolution(f, -lam, t, q))
    rhs = spherical_convolution(f.conj(), np.conj(lam), t, q)
    return float(abs(lhs - rhs))


def calculus_field(f, mu, t, q=DEFAULT_SPEC):
    """``f{phi_lam}(t) = int H_{t,lam} f d mu(lam)`` through ``H = f^ phi``."""
    nodes, weights = mu.quadrature()
    if nodes.size == 0:
        return 0j
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    fhat = spherical_transform(f, nodes, q)
    table = spherical.phi_table(nodes, t_arr, q)
    out = (fhat * weights) @ table
    return complex(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def truncated_phi(lam, T_cut, q=DEFAULT_SPEC):
    """``phi_lam`` times a smooth cutoff equal to 1 on ``[0, 0.8 T_cut]``."""
    interp = _phi_map(lam, T_cut * (1 + 1e-9), q)
    return RadialFunction(lambda r: interp(np.minimum(r, interp.r_max)) * smooth_cutoff(r / T_cut),
                          float(T_cut), "custom", {"phi": str(complex(lam)), "T_cut": T_cut})


def bochner_pairing_thm44(f, lam, mu, T_cut, q=DEFAULT_SPEC):
    """``(int (f * phi^T)^ d mu, int f^ (phi^T)^ d mu)`` with ``phi^T`` the truncated
    spherical function; the two agree by the product rule for transforms."""
    nodes, weights = mu.quadrature()
    if nodes.size == 0:
        return 0j, 0j
    phiT = truncated_phi(lam, T_cut, q)
    conv = convolution_function(f, phiT, q)
    # the outer radial rule spans the cutoff transition, so it grows with the support
    outer = q.replace(n_t=max(q.n_t, 32 * math.ceil(conv.support_radius)))
    lhs = spherical_transform(conv, nodes, outer) @ weights
    rhs = (spherical_transform(f, nodes, q) * spherical_transform(phiT, nodes, outer)) @ weights
    return complex(lhs), complex(rhs)


def plancherel_spherical_convolutions(f, lam, q=DEFAULT_SPEC, **grid):
    """Plancherel defect for ``x -> H_{x,lam} f`` against ``d zeta``.

    The transform of ``H_{x,lam} f`` carries the factor ``phi_lam^(nu)`` and
    ``d zeta`` divides by its squared modulus, so the two cancel exactly
    before any quadrature; what remains is the classical Plancherel defect.
    """
    from .transforms import plancherel_residual

    if complex(lam).imag != 0:
        raise ValueError("the Plancherel identity is stated for real lam")
    return plancherel_residual(f, q, **grid)
