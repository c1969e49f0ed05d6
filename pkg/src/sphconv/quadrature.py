"""Quadrature rules and the shared :class:`QuadratureSpec`.

Radial integrals use composite Gauss-Legendre panels; the K-circle integral
uses a trapezoid rule after a sinh change of variables (see
:func:`sphconv.spherical.phi`).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PANEL_ORDER = 16


class NonConvergenceError(ArithmeticError):
    """A quadrature did not settle when its node count was doubled."""

    def __init__(self, what, coarse, fine, tol):
        self.what = what
        self.coarse = coarse
        self.fine = fine
        self.tol = tol
        super().__init__(
            f"{what}: doubling the node count moved the value from {coarse!r} "
            f"to {fine!r} (tol {tol:g})"
        )


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts, truncation radii and tolerance for every integral.

    ``n_theta`` is the minimum node count of the K-integral (it is raised
    automatically for large radii or oscillatory spectral parameters),
    ``n_t`` the number of radial Gauss-Legendre nodes, ``n_u`` the number
    of nodes along N.
    """

    n_theta: int = 64
    n_t: int = 128
    t_max: float = 12.0
    n_u: int = 128
    u_max: float = 1.0e3
    tol: float = 1.0e-8

    def __post_init__(self):
        for name in ("n_theta", "n_t", "n_u"):
            if int(getattr(self, name)) < 8:
                raise ValueError(f"{name} must be at least 8")
        if not (self.t_max > 0 and self.u_max > 0):
            raise ValueError("t_max and u_max must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def replace(self, **changes) -> "QuadratureSpec":
        return dataclasses.replace(self, **changes)

    def refined(self) -> "QuadratureSpec":
        """Same spec with every node count doubled."""
        return self.replace(n_theta=2 * self.n_theta, n_t=2 * self.n_t, n_u=2 * self.n_u)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=64)
def _gl_reference(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a, b, n_nodes, order=PANEL_ORDER):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``.

    ``n_nodes`` is rounded up to a whole number of panels of ``order`` nodes.
    """
    n_panels = max(1, -(-int(n_nodes) // order))
    x, w = _gl_reference(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _exp_step(y):
    # exp(-1/y) for y > 0, zero otherwise
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = np.exp(-1.0 / y[pos])
    return out


def smooth_cutoff(x, flat=0.8):
    """C-infinity monotone cutoff: 1 on ``[0, flat]``, 0 on ``[1, inf)``."""
    x = np.abs(np.asarray(x, dtype=float))
    y = (1.0 - x) / (1.0 - flat)
    a = _exp_step(y)
    b = _exp_step(1.0 - y)
    return a / (a + b)


def check_doubling(what, coarse, fine, tol):
    """Raise :class:`NonConvergenceError` if ``coarse`` and ``fine`` disagree.

    The comparison is relative to ``max(1, |fine|)`` elementwise.
    """
    coarse = np.asarray(coarse)
    fine = np.asarray(fine)
    scale = np.maximum(1.0, np.abs(fine))
    bad = np.abs(coarse - fine) > tol * scale
    if np.any(bad):
        i = np.flatnonzero(np.ravel(bad))[0]
        raise NonConvergenceError(what, np.ravel(coarse)[i], np.ravel(fine)[i], tol)
