"""K-bi-invariant test functions, stored as even radial profiles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import smooth_cutoff


def _bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


@dataclass(frozen=True)
class RadialFunction:
    """A compactly supported function on G that depends only on the polar radius.

    ``profile`` is evaluated on ``|t|`` and forced to zero for
    ``|t| >= support_radius``, so the stored function is even and
    compactly supported whatever the callable does outside.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    support_radius: float
    family_tag: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.support_radius > 0:
            raise ValueError("support_radius must be positive")

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        vals = np.asarray(self.profile(t))
        if not np.iscomplexobj(vals):
            vals = vals.astype(float)
        vals = np.where(t < self.support_radius, vals, 0.0)
        return vals

    @property
    def is_real(self):
        probe = self(np.linspace(0.0, self.support_radius, 17))
        return not np.iscomplexobj(probe) or np.all(probe.imag == 0)

    def name(self):
        if self.params:
            inner = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                             for k, v in sorted(self.params.items()))
            return f"{self.family_tag}({inner})"
        return self.family_tag

    def conj(self):
        p = self.profile
        return RadialFunction(lambda t: np.conj(p(t)), self.support_radius,
                              "custom", {"conj": self.name()})

    def __mul__(self, c):
        p = self.profile
        return RadialFunction(lambda t: c * p(t), self.support_radius,
                              "custom", {"scaled": self.name(), "by": str(c)})

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RadialFunction):
            return NotImplemented
        f, g = self, other
        return RadialFunction(lambda t: f(t) + g(t),
                              max(f.support_radius, g.support_radius),
                              "custom", {"sum": f"{f.name()}+{g.name()}"})

    def __sub__(self, other):
        return self + (-1.0) * other

    def norm_sup(self, n=2001):
        return float(np.max(np.abs(self(np.linspace(0.0, self.support_radius, n)))))


def bump(T=1.0, height=1.0):
    """``height * exp(1 - 1/(1 - (t/T)^2))`` on ``|t| < T``."""
    T = float(T)
    return RadialFunction(lambda t: height * _bump(t / T), T, "bump",
                          {"T": T, "height": float(height)})


def gaussian_truncated(sigma=0.5, T=1.5):
    """Gaussian ``exp(-t^2/sigma^2)`` with a smooth cutoff reaching 0 at ``T``."""
    sigma, T = float(sigma), float(T)
    return RadialFunction(lambda t: np.exp(-(t / sigma) ** 2) * smooth_cutoff(t / T),
                          T, "gaussian-truncated", {"sigma": sigma, "T": T})


def shell(T=1.5, power=2):
    """``(t/T)^power`` times a bump: vanishes at the identity, even in t."""
    T = float(T)
    return RadialFunction(lambda t: (t / T) ** power * _bump(t / T), T, "shell",
                          {"T": T, "power": int(power)})


def custom(func, T):
    return RadialFunction(func, float(T), "custom", {"T": float(T)})


def zero(T=1.0):
    return RadialFunction(lambda t: np.zeros_like(np.asarray(t, dtype=float)), float(T),
                          "zero", {"T": float(T)})


def from_spec(tag, **params):
    """Build a profile from its family tag, as used by the CLI."""
    factories = {"bump": bump, "gaussian-truncated": gaussian_truncated,
                 "shell": shell, "zero": zero}
    try:
        return factories[tag](**params)
    except KeyError:
        raise ValueError(f"unknown profile family {tag!r}; "
                         f"choose from {sorted(factories)}") from None


def standard_profiles():
    """Five fixed profiles used by the identity suites and calibration."""
    return [
        bump(1.0),
        bump(1.5),
        gaussian_truncated(0.5, 1.5),
        shell(1.5, 2),
        bump(1.2) + 0.5 * gaussian_truncated(0.3, 0.8),
    ]
