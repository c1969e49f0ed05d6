"""Structure theory of SL(2, R) with K = SO(2).

Coordinates follow one fixed convention throughout the package:

* ``k(theta)`` is the rotation by ``theta``,
* ``a(t) = diag(e^t, e^-t)``, so the positive root is ``2t`` and rho is ``t``,
* ``n(u)`` is upper unipotent with off-diagonal entry ``u``.

The polar radius of ``g`` is ``log`` of its largest singular value and is
computed from ``sinh(t) = |((a - d), (b + c))| / 2``, which has no
cancellation near the identity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import DEFAULT_SPEC, check_doubling, gauss_legendre

DET_TOL = 1e-12
TWO_PI = 2.0 * math.pi


class TruncationWarning(UserWarning):
    """An integrand was still non-negligible at a truncation boundary."""


@dataclass(frozen=True)
class GroupElement:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(1.0, abs(self.a * self.d), abs(self.b * self.c))
        if abs(det - 1.0) > DET_TOL * scale:
            raise ValueError(f"determinant {det!r} is not 1")

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other):
        return multiply(self, other)

    def transpose(self):
        return GroupElement(self.a, self.c, self.b, self.d)

    def allclose(self, other, atol=1e-10):
        return bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))


@dataclass(frozen=True)
class IwasawaCoords:
    theta: float
    t: float
    u: float

    def assemble(self):
        return k(self.theta) @ a(self.t) @ n(self.u)


@dataclass(frozen=True)
class PolarCoords:
    theta1: float
    t: float
    theta2: float

    def assemble(self):
        return k(self.theta1) @ a(self.t) @ k(self.theta2)


def identity():
    return GroupElement(1.0, 0.0, 0.0, 1.0)


def k(theta):
    c, s = math.cos(theta), math.sin(theta)
    return GroupElement(c, -s, s, c)


def a(t):
    return GroupElement(math.exp(t), 0.0, 0.0, math.exp(-t))


def n(u):
    return GroupElement(1.0, float(u), 0.0, 1.0)


def multiply(g, h):
    return GroupElement(
        g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d,
    )


def inverse(g):
    return GroupElement(g.d, -g.b, -g.c, g.a)


def _wrap(theta):
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    return 0.0 if theta >= TWO_PI else theta


def iwasawa(g):
    """Coordinates ``(theta, t, u)`` with ``g = k(theta) a(t) n(u)``."""
    r = math.hypot(g.a, g.c)
    theta = _wrap(math.atan2(g.c, g.a))
    t = math.log(r)
    c, s = g.a / r, g.c / r
    # (k(-theta) g)_{12} = e^t u
    u = (c * g.b + s * g.d) / r
    return IwasawaCoords(theta, t, u)


def iwasawa_projection(g):
    """The A-coordinate ``H(g)``, i.e. ``log |first column of g|``."""
    return math.log(math.hypot(g.a, g.c))


def polar_radius(a_, b_, c_, d_):
    """Vectorised polar radius from matrix entries."""
    return np.arcsinh(0.5 * np.hypot(np.subtract(a_, d_), np.add(b_, c_)))


def polar(g):
    """Cartan coordinates ``g = k(theta1) a(t) k(theta2)`` with ``t >= 0``."""
    t = float(polar_radius(g.a, g.b, g.c, g.d))
    U, _, Vt = np.linalg.svd(g.matrix)
    if np.linalg.det(U) < 0:
        U[:, 1] *= -1.0
        Vt[1, :] *= -1.0
    theta1 = _wrap(math.atan2(U[1, 0], U[0, 0]))
    theta2 = _wrap(math.atan2(Vt[1, 0], Vt[0, 0]))
    return PolarCoords(theta1, t, theta2)


def radius_of(g):
    return float(polar_radius(g.a, g.b, g.c, g.d))


# ---------------------------------------------------------------- Haar measure


def haar_integral_polar(f, q=DEFAULT_SPEC):
    """``int_0^inf f(t) sinh(2t) dt``: the Haar integral with dk normalised.

    Raises :class:`~sphconv.quadrature.NonConvergenceError` if doubling the
    radial node count moves the value by more than ``q.tol`` (relative).
    """
    T = min(f.support_radius, q.t_max)

    def run(n_t):
        t, w = gauss_legendre(0.0, T, n_t)
        return np.sum(w * f(t) * np.sinh(2.0 * t))

    coarse, fine = run(q.n_t), run(2 * q.n_t)
    check_doubling("haar_integral_polar", coarse, fine, q.tol)
    return fine


def n_extent(t, T):
    """Half-length of ``{u : radius(a(t) n(u)) < T}``."""
    t = np.asarray(t, dtype=float)
    gap = np.sinh(T) ** 2 - np.sinh(t) ** 2
    return 2.0 * np.exp(-t) * np.sqrt(np.clip(gap, 0.0, None))


def radius_an(t, u):
    """Polar radius of ``a(t) n(u)``."""
    return np.arcsinh(np.sqrt(np.sinh(t) ** 2 + 0.25 * np.exp(2.0 * t) * u ** 2))


def n_integral(f, t, n_u, u_max=DEFAULT_SPEC.u_max):
    """``int_R f(a(t) n(u)) du`` for each ``t`` (vectorised)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    T = f.support_radius
    U = n_extent(t, T)
    if np.any(U > u_max):
        Uc = np.minimum(U, u_max)
        edge = np.abs(f(radius_an(t, Uc)))
        if np.any(edge[U > u_max] > 1e-12):
            warnings.warn("N-integral truncated at u_max with integrand above 1e-12",
                          TruncationWarning, stacklevel=2)
        U = Uc
    x, w = gauss_legendre(0.0, 1.0, n_u)
    u = U[:, None] * x[None, :]
    vals = f(radius_an(t[:, None], u))
    return 2.0 * U * (vals @ w)


def haar_integral_iwasawa(f, q=DEFAULT_SPEC):
    """``int int f(a(t) n(u)) e^{2t} du dt`` in Iwasawa coordinates (dk normalised)."""
    T = min(f.support_radius, q.t_max)

    def run(n_t, n_u):
        t, w = gauss_legendre(-T, T, n_t)
        return np.sum(w * np.exp(2.0 * t) * n_integral(f, t, n_u, q.u_max))

    coarse, fine = run(q.n_t, q.n_u), run(2 * q.n_t, 2 * q.n_u)
    check_doubling("haar_integral_iwasawa", coarse, fine, q.tol)
    return fine
