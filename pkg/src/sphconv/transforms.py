"""Spherical Fourier transform, Abel transform and the inversion integral.

Normalisations: the Haar measure is ``sinh(2t) dt`` in polar coordinates
(dk of total mass 1).  The Abel transform uses the Haar measure ``dn`` on N
for which ``e^{2t} dk dt dn`` is that same measure, i.e. ``dn = du / kappa_H``;
with this choice ``int A f(t) e^{i lam t} dt`` is exactly ``f^(lam)``.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np

from . import group, spherical
from .calibration import active
from .quadrature import DEFAULT_SPEC, check_doubling, gauss_legendre

SPECTRAL_MAX = 80.0
SPECTRAL_NODES = 4096
REFINEMENTS = 3


class GridTruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SpectralFunction:
    """Values of a Weyl-even function on a real spectral grid.

    ``weights`` integrate over ``[0, grid.max()]``; by evenness half the
    integral over the whole line.
    """

    grid: np.ndarray
    values: np.ndarray
    weights: np.ndarray | None = None

    def weyl_defect(self, func):
        """``max |v(lam) - v(-lam)|`` using ``func`` to evaluate at ``-lam``."""
        return float(np.max(np.abs(self.values - func(-self.grid))))


@functools.lru_cache(maxsize=8)
def spectral_grid(lam_max=SPECTRAL_MAX, n_nodes=SPECTRAL_NODES):
    """Gauss-Legendre panels on ``[0, lam_max]`` (no node at 0)."""
    nodes, weights = gauss_legendre(0.0, lam_max, n_nodes, order=32)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


# ----------------------------------------------------------- forward transform


def _radial_nodes(f, n_t):
    t, w = gauss_legendre(0.0, f.support_radius, n_t)
    return t, w * f(t) * np.sinh(2.0 * t)


def _probe_indices(lam_arr, k=24):
    # spread over |lam|, always including the most oscillatory one
    order = np.argsort(np.abs(lam_arr))
    pick = np.unique(np.linspace(0, lam_arr.size - 1, min(k, lam_arr.size)).round().astype(int))
    return order[pick]


def spherical_transform(f, lam, q=DEFAULT_SPEC, check=True):
    """``f^(lam) = int_G f(x) phi_{-lam}(x) dx`` (scalar or array ``lam``).

    With ``check`` the value at ``n`` radial nodes is compared against
    ``2n`` nodes on a probe set of spectral parameters that includes the
    largest one, starting from ``n = q.n_t`` and doubling ``n`` up to
    ``REFINEMENTS`` times before giving up.
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex)).ravel()

    def run(lams, n_t, k_check):
        t, w = _radial_nodes(f, n_t)
        return spherical.phi_table(-lams, t, q, check=k_check) @ w

    n_t = q.n_t
    vals = run(lam_arr, n_t, False)
    if check:
        idx = _probe_indices(lam_arr)
        for k in range(REFINEMENTS + 1):
            fine = run(lam_arr[idx], 2 * n_t, True)
            if k == REFINEMENTS:
                check_doubling("spherical_transform", vals[idx], fine, q.tol)
            if np.all(np.abs(vals[idx] - fine) <= q.tol * np.maximum(1.0, np.abs(fine))):
                break
            n_t *= 2
            vals = run(lam_arr, n_t, False)
    if np.ndim(lam) == 0:
        return complex(vals[0])
    return vals.reshape(np.shape(lam))


def transform_on_grid(f, lam_max=SPECTRAL_MAX, n_nodes=SPECTRAL_NODES, q=DEFAULT_SPEC):
    grid, w = spectral_grid(lam_max, n_nodes)
    return SpectralFunction(np.array(grid), spherical_transform(f, grid, q), np.array(w))


# ------------------------------------------------------------------- Abel side


def abel_transform(f, t, q=DEFAULT_SPEC, kappa_H=None):
    """``A f(t) = e^t int_N f(a(t) n) dn`` with ``dn = du / kappa_H``.

    Vanishes for ``|t| >= T``, since the radius of ``a(t) n(u)`` is at
    least ``|t|``.
    """
    kappa_H = active().kappa_H if kappa_H is None else kappa_H
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    coarse = group.n_integral(f, t_arr, q.n_u, q.u_max)
    fine = group.n_integral(f, t_arr, 2 * q.n_u, q.u_max)
    check_doubling("abel_transform", coarse, fine, q.tol)
    out = np.exp(t_arr) * fine / kappa_H
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def _abel_nodes(f, n_t, q, kappa_H):
    T = f.support_radius
    t, w = gauss_legendre(-T, T, n_t)
    return t, w * abel_transform(f, t, q, kappa_H)


def fourier_of_abel(f, lam, q=DEFAULT_SPEC, kappa_H=None):
    """``int_R A f(t) e^{i lam t} dt``; equals :func:`spherical_transform`."""
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))

    def run(n_t):
        t, w = _abel_nodes(f, n_t, q, kappa_H)
        return np.exp(1j * np.multiply.outer(lam_arr, t)) @ w

    fine = run(2 * q.n_t)
    check_doubling("fourier_of_abel", run(q.n_t), fine, q.tol)
    if np.ndim(lam) == 0:
        return complex(fine[0])
    return fine.reshape(np.shape(lam))


def beta_weight(mu, t):
    """``beta_mu(t) = int e^{i lam t} d mu(lam)``.

    Atoms ``i s`` on the imaginary segment contribute ``e^{-s t}``.
    """
    nodes, weights = mu.quadrature()
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.exp(1j * np.multiply.outer(t_arr, nodes)) @ weights
    return complex(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def calculus_at_identity(f, mu, q=DEFAULT_SPEC):
    """``f{phi_lam}(e) = int f^(lam) d mu(lam)``."""
    nodes, weights = mu.quadrature()
    if nodes.size == 0:
        return 0j
    return complex(spherical_transform(f, nodes, q) @ weights)


def weighted_abel_at_zero(f, mu, q=DEFAULT_SPEC, kappa_H=None):
    """``int_R A f(t) beta_mu(t) dt``, the beta-weighted Fourier transform at 0."""
    def run(n_t):
        t, w = _abel_nodes(f, n_t, q, kappa_H)
        return complex(np.sum(w * beta_weight(mu, t)))

    fine = run(2 * q.n_t)
    check_doubling("weighted_abel_at_zero", run(q.n_t), fine, q.tol)
    return fine


# ------------------------------------------------------------------ inversion


_DENSITY_CACHE = {}


def density_on_grid(grid, q=DEFAULT_SPEC):
    """``|c(lam)|^-2`` on a real grid, memoised per grid."""
    grid = np.asarray(grid, dtype=float)
    radii = tuple(active().c_fit_radii)
    key = (grid.tobytes(), radii, q)
    if key not in _DENSITY_CACHE:
        dens = spherical.plancherel_density(grid, radii, q)
        dens.setflags(write=False)
        _DENSITY_CACHE[key] = dens
    return _DENSITY_CACHE[key]


def plancherel_weights(b, q=DEFAULT_SPEC):
    """Quadrature weights ``w(lam) |c(lam)|^-2`` for the grid of ``b``."""
    if b.weights is None:
        raise ValueError("spectral function carries no quadrature weights")
    dens = density_on_grid(b.grid, q)
    return np.asarray(b.weights) * dens, dens


def wave_packet(b, t, q=DEFAULT_SPEC):
    """``(1/2) int_R b(lam) phi_lam(t) |c(lam)|^-2 dlam`` for Weyl-even ``b``.

    Warns when the integrand has not decayed at the end of the grid.
    """
    pw, dens = plancherel_weights(b, q)
    tail = abs(b.values[-1]) * dens[-1]
    if tail > 1e-10:
        warnings.warn(f"spectral grid truncated with |b c^-2| = {tail:.2e} at the end",
                      GridTruncationWarning, stacklevel=2)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    table = spherical.phi_table(b.grid, t_arr, q)
    out = (b.values * pw) @ table
    return complex(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def plancherel_side(b, q=DEFAULT_SPEC):
    """``(1/2) int_R |b(lam)|^2 |c(lam)|^-2 dlam``."""
    pw, _ = plancherel_weights(b, q)
    return float(np.sum(np.abs(b.values) ** 2 * pw))


def l2_norm_sq(f, q=DEFAULT_SPEC):
    g = type(f)(lambda t: np.abs(f(t)) ** 2, f.support_radius, "custom", {})
    return float(np.real(group.haar_integral_polar(g, q)))


def plancherel_residual(f, q=DEFAULT_SPEC, kappa_P=None, lam_max=SPECTRAL_MAX,
                        n_nodes=SPECTRAL_NODES):
    """Relative defect of ``||f||_2^2 = (1/kappa_P) (1/2) int |f^|^2 |c|^-2``."""
    kappa_P = active().kappa_P if kappa_P is None else kappa_P
    norm = l2_norm_sq(f, q)
    if norm == 0.0:
        return 0.0
    b = transform_on_grid(f, lam_max, n_nodes, q)
    return abs(norm - plancherel_side(b, q) / kappa_P) / norm
