"""Frozen numerical constants: Haar ratio, Plancherel constant, series convention.

The constants are produced by :func:`calibrate` and stored as JSON.  A copy
ships with the package (``data/calibration.json``); the environment variable
``SPHCONV_CALIBRATION`` points the library at a different file.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

ENV_VAR = "SPHCONV_CALIBRATION"


class CalibrationError(ValueError):
    """A calibration file is missing, malformed or out of tolerance."""


@dataclass(frozen=True)
class Calibration:
    kappa_H: float
    kappa_P: float
    series_convention: str
    c_fit_radii: tuple = (8.0, 9.0)
    spread: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        d = asdict(self)
        d["c_fit_radii"] = list(self.c_fit_radii)
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CalibrationError(f"calibration is not valid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise CalibrationError("calibration JSON must be an object")
        missing = {"kappa_H", "kappa_P", "series_convention", "c_fit_radii"} - set(d)
        if missing:
            raise CalibrationError(f"calibration is missing keys: {sorted(missing)}")
        try:
            cal = cls(float(d["kappa_H"]), float(d["kappa_P"]), str(d["series_convention"]),
                      tuple(float(r) for r in d["c_fit_radii"]), dict(d.get("spread", {})))
        except (TypeError, ValueError) as exc:
            raise CalibrationError(f"calibration has a malformed value: {exc}") from exc
        if not (math.isfinite(cal.kappa_H) and cal.kappa_H > 0
                and math.isfinite(cal.kappa_P) and cal.kappa_P > 0):
            raise CalibrationError("calibration constants must be positive and finite")
        if len(cal.c_fit_radii) != 2:
            raise CalibrationError("c_fit_radii must hold two radii")
        return cal


def load(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CalibrationError(f"cannot read calibration file {path}: {exc}") from exc
    return Calibration.from_json(text)


def save(cal, path):
    from .io import atomic_write_text
    atomic_write_text(Path(path), cal.to_json())


def packaged_path():
    return resources.files("sphconv") / "data" / "calibration.json"


_ACTIVE = None


def active():
    """The calibration in force: ``$SPHCONV_CALIBRATION`` or the packaged file."""
    global _ACTIVE
    env = os.environ.get(ENV_VAR)
    if env:
        return load(env)
    if _ACTIVE is None:
        _ACTIVE = Calibration.from_json(packaged_path().read_text())
    return _ACTIVE


# ------------------------------------------------------------------ compute

SPREAD_LIMIT = 1e-3


def _spread(values):
    values = [float(v) for v in values]
    mean = sum(values) / len(values)
    return (max(values) - min(values)) / abs(mean)


def round_trip_constant(f, q=None, lam_max=None, n_nodes=None):
    """Least-squares ratio ``wave_packet(f^) / f`` on the inner 90% of the support."""
    import numpy as np

    from . import transforms
    from .quadrature import DEFAULT_SPEC

    q = q or DEFAULT_SPEC
    b = transforms.transform_on_grid(f, lam_max or transforms.SPECTRAL_MAX,
                                     n_nodes or transforms.SPECTRAL_NODES, q)
    t = np.linspace(0.0, 0.9 * f.support_radius, 16)
    with warnings.catch_warnings():
        # bump transforms decay like exp(-sqrt(lam)); the tail is reported by verify
        warnings.simplefilter("ignore", transforms.GridTruncationWarning)
        wp = np.real(transforms.wave_packet(b, t, q))
    ft = np.real(f(t))
    return float(wp @ ft / (ft @ ft))


def series_convention_residuals(q=None, lam=2.0, t=2.0):
    """Series-minus-quadrature gap for each candidate convention at one point."""
    from . import spherical
    from .quadrature import DEFAULT_SPEC

    q = q or DEFAULT_SPEC
    ref = spherical.phi(lam, t, q)
    out = {}
    for conv in (spherical.LITERAL, spherical.SINGLE_STEP):
        try:
            val = spherical.hc_series_phi(lam, t, 40, conv, q=q)
            out[conv] = abs(val - ref) / abs(ref)
        except ZeroDivisionError:
            out[conv] = math.inf
    return out


def compute(q=None, profiles=None, c_fit_radii=(8.0, 9.0), **grid):
    """Measure the Haar ratio and Plancherel constant on several profiles.

    Raises :class:`CalibrationError` if either constant varies across the
    profiles by more than ``SPREAD_LIMIT`` (relative).
    """
    from . import group
    from .quadrature import DEFAULT_SPEC
    from .radial import standard_profiles

    q = q or DEFAULT_SPEC
    profiles = profiles or standard_profiles()
    kh = [float(group.haar_integral_iwasawa(f, q) / group.haar_integral_polar(f, q))
          for f in profiles]
    kp = [round_trip_constant(f, q, **grid) for f in profiles]
    conv = series_convention_residuals(q)
    spread = {"kappa_H": _spread(kh), "kappa_P": _spread(kp),
              "kappa_H_values": kh, "kappa_P_values": kp, "series_residuals": conv}
    cal = Calibration(sum(kh) / len(kh), sum(kp) / len(kp), min(conv, key=conv.get),
                      tuple(c_fit_radii), spread)
    if spread["kappa_H"] > SPREAD_LIMIT or spread["kappa_P"] > SPREAD_LIMIT:
        err = CalibrationError(
            f"calibration spread too large: kappa_H {spread['kappa_H']:.2e}, "
            f"kappa_P {spread['kappa_P']:.2e} (limit {SPREAD_LIMIT:g})")
        err.calibration = cal
        raise err
    return cal
