"""Elementary spherical functions of SL(2, R) and their series expansion.

The spectral parameter ``lam`` is a plain complex number with
``lam(log a(t)) = lam * t``; in these units rho is 1, the Weyl group acts by
``lam -> -lam`` and the bounded spherical functions are exactly those with
``|Im lam| <= 1``.

The K-integral

    phi_lam(t) = (1/2pi) int_0^{2pi} (e^{2t} cos^2 th + e^{-2t} sin^2 th)^{(i lam - 1)/2} dth

is evaluated after substituting ``tan(pi/2 - th) = e^s`` and then
``s = -t + w sinh(sigma)``; the result is a trapezoid sum in ``sigma`` whose
integrand is analytic in a strip and decays double exponentially.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import group
from .quadrature import DEFAULT_SPEC, check_doubling

C_FIT_RADII = (8.0, 9.0)
COND_LIMIT = 1e8
SINGULAR_TOL = 1e-10
ROOT_NORM2 = 8.0  # <alpha, alpha> for the trace form tr(ad X ad Y)
LITERAL = "literal"
SINGLE_STEP = "single-step"


class SingularParameterError(ZeroDivisionError):
    """The series recursion hit a vanishing denominator."""

    def __init__(self, lam, m):
        self.lam = complex(lam)
        self.m = m
        super().__init__(f"spectral parameter {self.lam!r} is singular for the "
                         f"series recursion at index m={m}")


class IllConditionedFitError(ArithmeticError):
    pass


class ConvergenceWarning(UserWarning):
    pass


# ------------------------------------------------------------------ K-integral


def _node_count(t, re_max, n_min):
    n = 64 + 20.0 * t + 4.0 * re_max * (t + 1.0)
    n = max(int(n_min), int(math.ceil(n)))
    return 16 * (-(-n // 16))


@lru_cache(maxsize=4096)
def _k_nodes(t, n):
    """Log-base values and weights of the mapped trapezoid rule (2n - 1 nodes)."""
    width = t + 1.0
    smax = math.asinh((t + 40.0) / width)
    sig = np.linspace(-smax, smax, 2 * n - 1)
    h = sig[1] - sig[0]
    s = -t + width * np.sinh(sig)
    logbase = np.logaddexp(2.0 * (t + s), -2.0 * t) - np.logaddexp(0.0, 2.0 * s)
    # (1/2pi) * 4 quarter periods * dtheta/ds * ds/dsigma
    w = (2.0 / math.pi) * h * width * np.cosh(sig) / (2.0 * np.cosh(s))
    logbase.setflags(write=False)
    w.setflags(write=False)
    return logbase, w


def _phi_one_radius(lam, t, q, check=True):
    lam = np.asarray(lam, dtype=complex)
    if t == 0.0:
        return np.ones_like(lam)
    re_max = float(np.max(np.abs(lam.real))) if lam.size else 0.0
    n = _node_count(t, re_max, q.n_theta)
    logbase, w = _k_nodes(t, n)
    if not check:
        logbase, w = logbase[::2], 2.0 * w[::2]
    if not np.any(lam.imag):
        # real parameters give real values: half the work
        E = np.cos(np.multiply.outer(0.5 * lam.real, logbase))
        w = w * np.exp(-0.5 * logbase)
    else:
        E = np.exp(np.multiply.outer(0.5 * (1j * lam - 1.0), logbase))
    fine = E @ w
    if check:
        coarse = 2.0 * (E[..., ::2] @ w[::2])
        check_doubling("phi", coarse, fine, q.tol)
    return fine.astype(complex)


def phi(lam, t, q=DEFAULT_SPEC, check=True):
    """Spherical function ``phi_lam`` at polar radius ``t``.

    ``lam`` and ``t`` broadcast against each other.  Only ``|t|`` matters.
    """
    lam_arr = np.asarray(lam, dtype=complex)
    t_arr = np.abs(np.asarray(t, dtype=float))
    lam_b, t_b = np.broadcast_arrays(lam_arr, t_arr)
    out = np.empty(lam_b.shape, dtype=complex)
    for tv in np.unique(t_b):
        sel = t_b == tv
        out[sel] = _phi_one_radius(lam_b[sel], float(tv), q, check)
    if out.ndim == 0:
        return complex(out)
    return out


def phi_table(lams, ts, q=DEFAULT_SPEC, check=True, chunk=256):
    """``phi(lams[i], ts[j])`` as a ``(len(lams), len(ts))`` array.

    Spectral parameters are grouped by size so that small ones do not pay
    for the node count the oscillatory ones need.
    """
    lams = np.asarray(lams, dtype=complex).ravel()
    ts = np.abs(np.asarray(ts, dtype=float)).ravel()
    out = np.empty((lams.size, ts.size), dtype=complex)
    order = np.argsort(np.abs(lams.real))
    for start in range(0, lams.size, chunk):
        idx = order[start:start + chunk]
        for j, tv in enumerate(ts):
            out[idx, j] = _phi_one_radius(lams[idx], float(tv), q, check)
    return out


def xi(t, q=DEFAULT_SPEC):
    """Harish-Chandra's function ``Xi = phi_0``."""
    val = phi(0.0, t, q)
    return np.real(val) if np.ndim(val) else float(np.real(val))


def xi_bound_constant(ts, q=DEFAULT_SPEC):
    """Smallest ``c`` with ``Xi(t) e^t <= c (1 + t)`` on ``ts``, and ``min Xi(t) e^t``."""
    ts = np.asarray(ts, dtype=float)
    g = np.array([xi(tv, q) for tv in ts]) * np.exp(ts)
    return float(np.max(g / (1.0 + ts))), float(np.min(g))


def boundedness_check(lam):
    """True iff ``phi_lam`` is bounded, i.e. ``|Im lam| <= 1``."""
    return abs(complex(lam).imag) <= 1.0 + 1e-12


def sup_abs_phi(lam, ts, q=DEFAULT_SPEC):
    return float(np.max(np.abs(phi(lam, np.asarray(ts, dtype=float), q))))


class PhiInterpolant:
    """Chebyshev interpolant of ``r -> phi_lam(r)`` on ``[0, r_max]``.

    Used where a convolution needs ``phi_lam`` at thousands of scattered
    radii; the degree grows until the trailing coefficients fall below
    ``1e-14`` relative to the largest one, then the rounding-noise tail is
    chopped.
    """

    def __init__(self, lam, r_max, q=DEFAULT_SPEC, max_degree=1024):
        self.lam = complex(lam)
        self.r_max = float(r_max)
        deg = 32
        while True:
            x = np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
            r = 0.5 * self.r_max * (x + 1.0)
            vals = _phi_many_radii(self.lam, r, q)
            coef = np.polynomial.chebyshev.chebfit(x, vals, deg)
            tail = np.max(np.abs(coef[-4:]))
            if tail <= 1e-14 * np.max(np.abs(coef)) or deg >= max_degree:
                break
            deg *= 2
        big = np.flatnonzero(np.abs(coef) > 1e-15 * np.max(np.abs(coef)))
        self.coef = coef[: big[-1] + 1]
        self.degree = self.coef.size - 1

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        if np.any(r > self.r_max * (1 + 1e-12)):
            raise ValueError("radius outside the interpolation interval")
        x = 2.0 * r / self.r_max - 1.0
        return np.polynomial.chebyshev.chebval(x, self.coef)


def _phi_many_radii(lam, r, q):
    return np.array([_phi_one_radius(np.array([lam]), float(rv), q)[0] for rv in r])


@lru_cache(maxsize=256)
def phi_interpolant(lam, r_max, q=DEFAULT_SPEC):
    return PhiInterpolant(lam, r_max, q)


def phi_of(lam, g, q=DEFAULT_SPEC):
    """``phi_lam`` at an arbitrary group element."""
    return phi(lam, group.radius_of(g), q)


# --------------------------------------------------------------- series


@dataclass(frozen=True)
class SeriesCoefficients:
    lam: complex
    coeffs: np.ndarray
    convention_flag: str

    @property
    def M(self):
        return len(self.coeffs) - 1

    def residuals(self):
        """Absolute residual of the stored recursion at each index."""
        return _recursion_residuals(self.lam, self.coeffs, self.convention_flag)


def _inner_root(m_mu, m_other):
    # <m_mu alpha, m_other alpha>
    return ROOT_NORM2 * m_mu * m_other


def _recursion_terms(lam, m, convention):
    """Denominator and the (index, weight) list of the recursion at ``m``.

    The spectral parameter enters the recursion as the functional
    ``i lam rho = (i lam / 2) alpha``; inner products are trace-form ones.
    """
    lam_r = 0.5j * lam  # coefficient of alpha
    rho_r = 0.5
    denom = _inner_root(m, m) - 2.0 * _inner_root(m, lam_r)
    step = 2 if convention == LITERAL else 1
    terms = []
    k = 1
    while m - step * k >= 0:
        j = m - step * k
        # -2 n(alpha) <lam - mu + step*k*alpha - rho, alpha>, n(alpha) = 1
        weight = -2.0 * _inner_root(lam_r - m + step * k - rho_r, 1.0)
        terms.append((j, weight))
        k += 1
    return denom, terms


def _recursion_residuals(lam, coeffs, convention):
    res = np.zeros(len(coeffs))
    res[0] = abs(coeffs[0] - 1.0)
    for m in range(1, len(coeffs)):
        denom, terms = _recursion_terms(lam, m, convention)
        rhs = sum(w * coeffs[j] for j, w in terms)
        res[m] = abs(denom * coeffs[m] - rhs) / max(1.0, abs(denom * coeffs[m]))
    return res


def hc_series_coeffs(lam, M, convention=None):
    """Coefficients ``a_0..a_M`` of the Harish-Chandra series.

    Index ``m`` labels the lattice point ``m * alpha``, whose exponential is
    ``e^{-2 m t}``.  With the literal convention (steps of ``2 alpha``) the
    odd coefficients are structurally zero and are not divided for.

    Raises :class:`SingularParameterError` on a vanishing denominator.
    """
    if convention is None:
        from .calibration import active
        convention = active().series_convention
    if convention not in (LITERAL, SINGLE_STEP):
        raise ValueError(f"unknown series convention {convention!r}")
    lam = complex(lam)
    coeffs = np.zeros(M + 1, dtype=complex)
    coeffs[0] = 1.0
    for m in range(1, M + 1):
        if convention == LITERAL and m % 2:
            continue
        denom, terms = _recursion_terms(lam, m, convention)
        if abs(denom) < SINGULAR_TOL:
            raise SingularParameterError(lam, m)
        coeffs[m] = sum(w * coeffs[j] for j, w in terms) / denom
    coeffs.setflags(write=False)
    return SeriesCoefficients(lam, coeffs, convention)


def hc_series_phi(lam, t, M=40, convention=None, c=None, q=DEFAULT_SPEC):
    """``phi_lam(t)`` from the two-term Harish-Chandra expansion.

    ``c`` may pass a precomputed :class:`CFunctionValue`; otherwise the
    c-function is extracted numerically.
    """
    t = float(t)
    if not t > 0:
        raise ValueError("the series is only valid for t > 0")
    if t < 0.3:
        warnings.warn(f"slow series convergence at t={t}", ConvergenceWarning, stacklevel=2)
    lam = complex(lam)
    if c is None:
        c = c_function(lam, q=q)
    m = np.arange(M + 1)
    total = 0j
    for sign, cval in ((1.0, c.c), (-1.0, c.c_minus)):
        a_m = hc_series_coeffs(sign * lam, M, convention).coeffs
        total += cval * np.sum(a_m * np.exp((1j * sign * lam - 1.0 - 2.0 * m) * t))
    return complex(total)


# --------------------------------------------------------------- c-function


@dataclass(frozen=True)
class CFunctionValue:
    lam: complex
    c: complex
    c_minus: complex
    method: str = "asymptotic-fit"
    radii: tuple = C_FIT_RADII
    condition: float = 1.0

    @property
    def plancherel_density(self):
        """``|c(lam)|^-2``."""
        return 1.0 / abs(self.c) ** 2


def _fit_matrix(lam, radii):
    r = np.asarray(radii, dtype=float)
    A = np.stack([np.exp(1j * lam * r), np.exp(-1j * lam * r)], axis=-1)
    return A


def _solve_fit(lam, vals, radii):
    A = _fit_matrix(lam, radii)
    scale = np.linalg.norm(A, axis=0)
    As = A / scale
    cond = float(np.linalg.cond(As))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditionedFitError(
            f"c-function fit at lam={complex(lam)!r} has condition number {cond:.3g}")
    sol = np.linalg.solve(As, vals) / scale
    return sol, cond


def c_function(lam, radii=C_FIT_RADII, q=DEFAULT_SPEC):
    """Harish-Chandra c-function by fitting ``phi_lam(t) e^t`` at two radii.

    Raises :class:`IllConditionedFitError` for ``lam`` too close to a point
    where the two exponentials cannot be separated (``lam = 0`` among them).
    """
    return _c_function_cached(complex(lam), tuple(float(r) for r in radii), q)


@lru_cache(maxsize=8192)
def _c_function_cached(lam, radii, q):
    vals = np.array([phi(lam, r, q) * math.exp(r) for r in radii])
    (c_plus, c_minus), cond = _solve_fit(lam, vals, radii)
    return CFunctionValue(lam, complex(c_plus), complex(c_minus), "asymptotic-fit",
                          radii, cond)


def plancherel_density(lams, radii=C_FIT_RADII, q=DEFAULT_SPEC):
    """``|c(lam)|^-2`` on an array of real spectral parameters (vectorised fit)."""
    lams = np.asarray(lams, dtype=float)
    table = phi_table(lams, radii, q) * np.exp(np.asarray(radii))[None, :]
    out = np.empty(lams.size)
    for i, lam in enumerate(lams):
        (c_plus, _), _ = _solve_fit(lam, table[i], radii)
        out[i] = 1.0 / abs(c_plus) ** 2
    return out


# ------------------------------------------------------------- identities


def functional_equation_residual(lam, x, y, q=DEFAULT_SPEC, n_theta=256, max_theta=1 << 16):
    """``|(1/2pi) int phi(x k(th) y) dth - phi(x) phi(y)|``.

    The products ``x k(th) y`` are formed as matrices; the periodic trapezoid
    rule in ``th`` doubles until two successive sums agree.
    """
    rx, ry = group.radius_of(x), group.radius_of(y)
    r_max = max(rx + ry, 1e-3)
    interp = phi_interpolant(complex(lam), float(r_max * (1 + 1e-9)), q)

    def k_mean(n):
        th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        c, s = np.cos(th), np.sin(th)
        xa, xb = x.a * c + x.b * s, -x.a * s + x.b * c
        xc, xd = x.c * c + x.d * s, -x.c * s + x.d * c
        r = group.polar_radius(xa * y.a + xb * y.c, xa * y.b + xb * y.d,
                               xc * y.a + xd * y.c, xc * y.b + xd * y.d)
        return np.mean(interp(np.minimum(r, interp.r_max)))

    n, coarse = n_theta, k_mean(n_theta)
    while True:
        fine = k_mean(2 * n)
        if abs(fine - coarse) <= q.tol * max(1.0, abs(fine)) or 2 * n >= max_theta:
            break
        n, coarse = 2 * n, fine
    check_doubling("functional equation K-average", coarse, fine, q.tol)
    return float(abs(fine - phi(lam, rx, q) * phi(lam, ry, q)))


def casimir_residual(lam, t, h, q=DEFAULT_SPEC):
    """Finite-difference residual of ``u'' + 2 coth(2t) u' + (lam^2 + 1) u``."""
    if not t > h > 0:
        raise ValueError("need t > h > 0")
    u = phi(lam, np.array([t - h, t, t + h]), q)
    return radial_casimir_residual(u, t, h, lam)


def radial_casimir_residual(u3, t, h, lam):
    """Residual of the radial Casimir equation from three samples at ``t-h, t, t+h``."""
    um, u0, up = u3
    d2 = (up - 2.0 * u0 + um) / h ** 2
    d1 = (up - um) / (2.0 * h)
    return float(abs(d2 + 2.0 / math.tanh(2.0 * t) * d1 + (complex(lam) ** 2 + 1.0) * u0))
