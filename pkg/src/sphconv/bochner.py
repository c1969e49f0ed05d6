"""Spectral measures on the spherical dual and the Bochner functional ``T[f] = int f^ dmu``.

A :class:`SpectralMeasure` has a sampled density on a real grid (integrated
with the trapezoid rule) and finitely many atoms.  Atom locations are real
(principal series) or ``i s`` with ``0 <= s <= 1`` (complementary series and
the trivial representation at ``s = 1``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .quadrature import DEFAULT_SPEC
from .transforms import spherical_transform

ATOM_TOL = 1e-12


class MeasureError(ValueError):
    pass


def _valid_location(z):
    z = complex(z)
    if abs(z.imag) <= ATOM_TOL:
        return True
    return abs(z.real) <= ATOM_TOL and -ATOM_TOL <= z.imag <= 1.0 + ATOM_TOL


def _trapezoid_weights(x):
    if x.size < 2:
        return np.zeros_like(x)
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    return w


@dataclass(frozen=True)
class SpectralMeasure:
    """Positive measure ``density(lam) dlam + sum_j w_j delta_{z_j}``.

    ``growth`` is the certificate ``(degree, bound)`` claimed for
    ``int dmu / (1 + |lam|^degree)``.
    """

    grid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    density: np.ndarray = field(default_factory=lambda: np.zeros(0))
    atoms: tuple = ()
    growth: tuple = (0, np.inf)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float).ravel()
        dens = np.asarray(self.density, dtype=float).ravel()
        if grid.shape != dens.shape:
            raise MeasureError("density grid and values differ in length")
        if grid.size and np.any(np.diff(grid) <= 0):
            raise MeasureError("density grid must be strictly increasing")
        if np.any(dens < 0) or not np.all(np.isfinite(dens)):
            raise MeasureError("density must be finite and non-negative")
        atoms = tuple((complex(z), float(w)) for z, w in self.atoms)
        for z, w in atoms:
            if not (w >= 0 and np.isfinite(w)):
                raise MeasureError(f"atom weight {w} must be finite and non-negative")
            if not _valid_location(z):
                raise MeasureError(f"atom location {z} is neither real nor on i[0, 1]")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", dens)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "growth", (int(self.growth[0]), float(self.growth[1])))

    # quadrature ----------------------------------------------------------

    def quadrature(self):
        """Nodes and weights with ``int F dmu ~= sum w F(node)``."""
        w = _trapezoid_weights(self.grid) * self.density
        keep = w > 0
        nodes = [self.grid[keep].astype(complex)]
        weights = [w[keep]]
        if self.atoms:
            z, aw = zip(*self.atoms)
            nodes.append(np.array(z, dtype=complex))
            weights.append(np.array(aw, dtype=float))
        return np.concatenate(nodes), np.concatenate(weights)

    def integrate(self, func):
        nodes, weights = self.quadrature()
        if nodes.size == 0:
            return 0j
        return complex(np.sum(weights * func(nodes)))

    def total_mass(self):
        return float(np.real(self.integrate(lambda z: np.ones_like(z))))

    def is_even(self, tol=1e-12):
        """Density symmetric about 0 and atoms closed under ``z -> -z`` on the real axis."""
        if self.grid.size and not (np.allclose(self.grid, -self.grid[::-1], atol=tol)
                                   and np.allclose(self.density, self.density[::-1], atol=tol)):
            return False
        real = sorted((round(z.real, 12), w) for z, w in self.atoms if z.imag == 0 and z.real != 0)
        mirror = sorted((round(-z.real, 12), w) for z, w in self.atoms if z.imag == 0 and z.real != 0)
        return real == mirror

    # algebra ---------------------------------------------------------------

    def scaled(self, c):
        if c < 0:
            raise MeasureError("measures can only be scaled by c >= 0")
        return SpectralMeasure(self.grid, c * self.density,
                               tuple((z, c * w) for z, w in self.atoms), self.growth)

    def __add__(self, other):
        if self.grid.size and other.grid.size and not np.array_equal(self.grid, other.grid):
            raise MeasureError("densities on different grids cannot be added")
        grid = self.grid if self.grid.size else other.grid
        dens = (self.density if self.grid.size else 0) + (other.density if other.grid.size else 0)
        if not grid.size:
            dens = np.zeros(0)
        growth = (max(self.growth[0], other.growth[0]), self.growth[1] + other.growth[1])
        return SpectralMeasure(grid, dens, self.atoms + other.atoms, growth)

    # serialization ---------------------------------------------------------

    def to_dict(self):
        bound = self.growth[1]
        return {
            "density": [[float(x), float(v)] for x, v in zip(self.grid, self.density)],
            "atoms": [[z.real, z.imag, w] for z, w in self.atoms],
            "growth": {"degree": self.growth[0], "bound": None if np.isinf(bound) else bound},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d):
        try:
            dens = np.array(d.get("density", []), dtype=float).reshape(-1, 2)
            atoms = []
            for a in d.get("atoms", []):
                if len(a) == 2:  # [im_location, weight]
                    atoms.append((1j * float(a[0]), float(a[1])))
                elif len(a) == 3:
                    atoms.append((complex(float(a[0]), float(a[1])), float(a[2])))
                else:
                    raise ValueError(f"atom {a!r} must be [re, im, weight] or [im, weight]")
            g = d.get("growth", {}) or {}
            bound = g.get("bound")
            growth = (int(g.get("degree", 0)), np.inf if bound is None else float(bound))
        except (TypeError, ValueError, AttributeError) as exc:
            raise MeasureError(f"malformed measure: {exc}") from exc
        return cls(dens[:, 0], dens[:, 1], tuple(atoms), growth)

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MeasureError(f"measure is not valid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise MeasureError("measure JSON must be an object")
        return cls.from_dict(d)


# ------------------------------------------------------------------ factories


def atomic(locations, weights=None, growth=None):
    locations = list(locations)
    weights = [1.0] * len(locations) if weights is None else list(weights)
    mass = float(sum(weights))
    return SpectralMeasure(atoms=tuple(zip(locations, weights)),
                           growth=growth or (0, mass * (1 + 1e-12)))


def gaussian(sigma=1.0, mass=1.0, center=0.0, width=8.0, n=801, growth=None):
    """Normal density ``N(center, sigma^2)`` scaled to ``mass``, cut at ``width`` sigmas."""
    grid = np.linspace(center - width * sigma, center + width * sigma, n)
    dens = mass * np.exp(-0.5 * ((grid - center) / sigma) ** 2) / (sigma * np.sqrt(2 * np.pi))
    return SpectralMeasure(grid, dens, (), growth or (0, mass * 1.01))


def uniform(a=-2.0, b=2.0, mass=1.0, n=801, growth=None):
    grid = np.linspace(a, b, n)
    return SpectralMeasure(grid, np.full(n, mass / (b - a)), (), growth or (0, mass * 1.01))


def smooth_bump(a=0.5, b=2.5, mass=1.0, n=801, growth=None):
    """C-infinity density supported on ``[a, b]`` with total mass ``mass``."""
    grid = np.linspace(a, b, n)
    x = (2.0 * grid - (a + b)) / (b - a)
    inside = np.abs(x) < 1
    dens = np.zeros(n)
    dens[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    dens *= mass / np.sum(_trapezoid_weights(grid) * dens)
    return SpectralMeasure(grid, dens, (), growth or (0, mass * 1.01))


def quadratic_gaussian(sigma=1.0, mass=1.0, width=8.0, n=401, growth=None):
    """Density ``lam^2 exp(-lam^2 / 2 sigma^2)`` scaled to ``mass``.

    It vanishes at 0, where ``|c(lam)|^-2`` does, so ``int phi_lam dmu`` decays
    faster than ``Xi``; truncation sweeps against it converge.
    """
    grid = np.linspace(-width * sigma, width * sigma, n)
    dens = mass * grid ** 2 * np.exp(-0.5 * (grid / sigma) ** 2) / (sigma ** 3 * np.sqrt(2 * np.pi))
    return SpectralMeasure(grid, dens, (), growth or (0, mass * 1.01))


def from_density(func, grid, growth=(0, np.inf)):
    grid = np.asarray(grid, dtype=float)
    return SpectralMeasure(grid, np.asarray(func(grid), dtype=float), (), growth)


# ----------------------------------------------------------- Bochner functional


@dataclass(frozen=True)
class BochnerFunctional:
    measure: SpectralMeasure

    def __call__(self, f, q=DEFAULT_SPEC):
        return evaluate(self, f, q)


def evaluate(Tm, f, q=DEFAULT_SPEC):
    """``T[f] = int f^(lam) dmu(lam)``."""
    mu = Tm.measure if isinstance(Tm, BochnerFunctional) else Tm
    nodes, weights = mu.quadrature()
    if nodes.size == 0:
        return 0j
    return complex(spherical_transform(f, nodes, q) @ weights)


@dataclass(frozen=True)
class PositivityReport:
    direct: complex
    spectral: complex
    residual: float

    @property
    def passed(self):
        return self.residual < 1e-6 * (1.0 + abs(self.direct)) and self.direct.real >= -1e-10


def positive_definiteness_residual(Tm, f, q=DEFAULT_SPEC):
    """``T[f * f^*]`` through the convolution and through ``int |f^|^2 dmu``.

    For radial ``f`` the adjoint ``f^*(x) = conj f(x^-1)`` has the profile
    ``conj f``.
    """
    from .convolution import convolution_function

    mu = Tm.measure if isinstance(Tm, BochnerFunctional) else Tm
    nodes, weights = mu.quadrature()
    if nodes.size == 0:
        return PositivityReport(0j, 0j, 0.0)
    g = convolution_function(f, f.conj(), q)
    a = complex(spherical_transform(g, nodes, q) @ weights)
    fhat = spherical_transform(f, nodes, q)
    # on the spherical dual (f^*)^ = conj(f^); for real f this is f^ itself at i s
    b = complex(np.sum(weights * fhat * np.conj(fhat)))
    return PositivityReport(a, b, max(abs(a - b), max(0.0, -a.real)))


def support_check(mu, p):
    """True iff every atom of positive weight lies in the strip ``|Im| <= 2/p - 1``."""
    if not 1.0 <= p <= 2.0:
        raise ValueError("p must lie in [1, 2]")
    eps = 2.0 / p - 1.0
    return all(abs(z.imag) <= eps + ATOM_TOL for z, w in mu.atoms if w > 0)


def growth_check(mu):
    """``(int dmu / (1 + |lam|^Q) <= bound, integral)`` for the certificate ``(Q, bound)``."""
    degree, bound = mu.growth
    value = float(np.real(mu.integrate(lambda z: 1.0 / (1.0 + np.abs(z) ** degree))))
    return value <= bound, value
