"""Command-line front end: ``sphconv {sphfn,transform,conv,bochner,verify,calibrate}``.

Exit codes: 0 all checks pass, 1 a check failed, 2 quadrature did not
converge or calibration spread too large, 3 singular spectral parameter,
64 usage error, 65 unreadable calibration or measure file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bochner, calibration, convolution, radial, spherical, transforms, verify
from .io import atomic_write_text, table_to_csv, table_to_json
from .quadrature import DEFAULT_SPEC, NonConvergenceError

EXIT_OK, EXIT_FAIL, EXIT_NONCONVERGENCE, EXIT_SINGULAR = 0, 1, 2, 3
EXIT_USAGE, EXIT_DATA = 64, 65


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# ------------------------------------------------------------------ parsing


def parse_complex(text):
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot read {text!r} as a complex number") from None


def parse_lambda_list(text):
    if text is None or not text.strip():
        return []
    return [parse_complex(p) for p in text.split(",") if p.strip()]


def parse_t_list(text):
    """Comma-separated reals, or ``start:stop:count`` for an even grid."""
    if text is None or not text.strip():
        return []
    if text.count(":") == 2:
        a, b, n = text.split(":")
        try:
            return list(np.linspace(float(a), float(b), int(n)))
        except ValueError:
            raise UsageError(f"bad grid {text!r}; expected start:stop:count") from None
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot read {text!r} as a list of reals") from None


def parse_profile(text):
    """``family[:key=value,...]``, e.g. ``bump:T=1.5`` or ``gaussian-truncated:sigma=0.4``."""
    tag, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise UsageError(f"profile parameter {item!r} is not key=value")
        try:
            params[key.strip()] = int(value) if key.strip() == "power" else float(value)
        except ValueError:
            raise UsageError(f"profile parameter {item!r} is not numeric") from None
    try:
        return radial.from_spec(tag.strip(), **params)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def parse_quadrature(items):
    changes = {}
    for item in items or []:
        key, eq, value = item.partition("=")
        if not eq or key not in DEFAULT_SPEC.to_dict():
            raise UsageError(f"bad quadrature override {item!r}; keys: "
                             f"{', '.join(DEFAULT_SPEC.to_dict())}")
        changes[key] = int(value) if key.startswith("n_") else float(value)
    try:
        return DEFAULT_SPEC.replace(**changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


@dataclass
class RunConfig:
    command: str
    quadrature: object = DEFAULT_SPEC
    lambda_list: list = field(default_factory=list)
    t_list: list = field(default_factory=list)
    profile: object = None
    measure: object = None
    output: str = "-"
    format: str = "csv"
    tol: float | None = None
    seed: int = verify.DEFAULT_SEED
    kind: str = "spherical"


def load_measure(path):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return bochner.SpectralMeasure.from_json(fh.read())
    except OSError as exc:
        raise DataError(f"cannot read measure file {path}: {exc}") from None
    except bochner.MeasureError as exc:
        raise DataError(f"bad measure file {path}: {exc}") from None


def use_calibration(path):
    """Validate ``path`` and make it the active calibration for this process."""
    try:
        calibration.load(path)
    except calibration.CalibrationError as exc:
        raise DataError(str(exc)) from None
    os.environ[calibration.ENV_VAR] = str(path)


# ------------------------------------------------------------------- output


def emit(cfg, columns, meta=None):
    text = (table_to_csv(columns, meta) if cfg.format == "csv"
            else table_to_json(columns, meta))
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write_text(cfg.output, text)


def emit_json(cfg, doc):
    text = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write_text(cfg.output, text)


def _tol(cfg, default):
    return default if cfg.tol is None else cfg.tol


def _require(values, what):
    if not values:
        raise UsageError(f"{what} is empty")


# ----------------------------------------------------------------- commands


def cmd_sphfn(cfg):
    _require(cfg.lambda_list, "--lambda")
    _require(cfg.t_list, "--t")
    tol = _tol(cfg, 1e-6)
    rows = {"lambda": [], "t": [], "phi_quadrature": [], "phi_series": [], "abs_diff": []}
    for lam in cfg.lambda_list:
        # surfaces SingularParameterError before any output is produced
        spherical.hc_series_coeffs(lam, 40)
        for t in cfg.t_list:
            quad = spherical.phi(lam, t, cfg.quadrature)
            if abs(t) == 0:
                ser = 1.0 + 0j  # phi_lam(e) = 1; the expansion itself starts at t > 0
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", spherical.ConvergenceWarning)
                    ser = spherical.hc_series_phi(lam, abs(t), 40, q=cfg.quadrature)
            rows["lambda"].append(lam)
            rows["t"].append(t)
            rows["phi_quadrature"].append(quad)
            rows["phi_series"].append(ser)
            rows["abs_diff"].append(abs(quad - ser))
    cols = {k: np.array(v) for k, v in rows.items()}
    cols["lambda"] = cols["lambda"].astype(complex)
    emit(cfg, cols)
    return EXIT_OK if np.all(cols["abs_diff"] < tol) else EXIT_FAIL


def cmd_transform(cfg):
    f = cfg.profile or radial.bump(1.0)
    q = cfg.quadrature
    kind = cfg.kind
    if kind in ("spherical", "fourier-abel"):
        _require(cfg.lambda_list, "--lambda")
        lam = np.array(cfg.lambda_list, dtype=complex)
        fh = transforms.spherical_transform(f, lam, q)
        cols = {"lambda": lam, "fhat": fh}
        ok = True
        if kind == "fourier-abel":
            fa = transforms.fourier_of_abel(f, lam, q)
            cols.update(fourier_abel=fa, abs_diff=np.abs(fh - fa))
            ok = bool(np.all(cols["abs_diff"] < _tol(cfg, 1e-6) * np.maximum(1, np.abs(fh))))
        emit(cfg, cols, {"profile": f.name()})
        return EXIT_OK if ok else EXIT_FAIL
    if kind == "abel":
        _require(cfg.t_list, "--t")
        t = np.array(cfg.t_list)
        emit(cfg, {"t": t, "abel": transforms.abel_transform(f, t, q)}, {"profile": f.name()})
        return EXIT_OK
    if kind == "round-trip":
        t = np.array(cfg.t_list) if cfg.t_list else np.linspace(0.0, f.support_radius, 41)
        b = transforms.transform_on_grid(f, q=q)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", transforms.GridTruncationWarning)
            rec = transforms.wave_packet(b, t, q) / calibration.active().kappa_P
        diff = np.abs(rec - f(t))
        emit(cfg, {"t": t, "f": f(t), "reconstructed": rec, "diff": diff}, {"profile": f.name()})
        return EXIT_OK if np.max(diff) < _tol(cfg, 1e-3) else EXIT_FAIL
    if kind == "plancherel":
        res = transforms.plancherel_residual(f, q)
        emit(cfg, {"residual": np.array([res])}, {"profile": f.name()})
        return EXIT_OK if res < _tol(cfg, 1e-3) else EXIT_FAIL
    if kind == "calculus":
        if cfg.measure is None:
            raise UsageError("--kind calculus needs --measure")
        a = transforms.calculus_at_identity(f, cfg.measure, q)
        b = transforms.weighted_abel_at_zero(f, cfg.measure, q)
        diff = abs(a - b)
        emit(cfg, {"calculus_at_identity": np.array([a]), "weighted_abel": np.array([b]),
                   "abs_diff": np.array([diff])}, {"profile": f.name()})
        return EXIT_OK if diff < _tol(cfg, 1e-6) * (1 + abs(a)) else EXIT_FAIL
    raise UsageError(f"unknown transform kind {kind!r}")


def cmd_conv(cfg):
    _require(cfg.lambda_list, "--lambda")
    f = cfg.profile or radial.bump(1.0)
    t = np.array(cfg.t_list) if cfg.t_list else np.linspace(0.0, convolution.FIELD_T_MAX,
                                                             convolution.FIELD_NODES)
    tol = _tol(cfg, 1e-6)
    cols = {"lambda": [], "t": [], "H": [], "factorized": [], "abs_diff": []}
    ok = True
    for lam in cfg.lambda_list:
        H = np.asarray(convolution.spherical_convolution(f, lam, t, cfg.quadrature), dtype=complex)
        fh = transforms.spherical_transform(f, lam, cfg.quadrature)
        pred = fh * spherical.phi(lam, t, cfg.quadrature)
        diff = np.abs(H - pred)
        ok &= bool(np.all(diff < tol * (1 + abs(fh))))
        cols["lambda"].append(np.full(t.size, lam, dtype=complex))
        cols["t"].append(t)
        cols["H"].append(H)
        cols["factorized"].append(pred)
        cols["abs_diff"].append(diff)
    emit(cfg, {k: np.concatenate(v) for k, v in cols.items()}, {"profile": f.name()})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bochner(cfg):
    f = cfg.profile or radial.bump(1.0)
    mu = cfg.measure or bochner.gaussian(1.0)
    Tm = bochner.BochnerFunctional(mu)
    value = bochner.evaluate(Tm, f, cfg.quadrature)
    rep = bochner.positive_definiteness_residual(Tm, f, cfg.quadrature)
    growth_ok, growth_value = bochner.growth_check(mu)
    tol = _tol(cfg, 1e-6)
    positive = rep.residual < tol * (1 + abs(rep.direct)) and rep.direct.real >= -1e-10
    support = {f"support_p={p:g}": bochner.support_check(mu, p) for p in (1.0, 1.5, 2.0)}
    doc = {"profile": f.name(), "T_f": [value.real, value.imag],
           "T_ffstar_direct": [rep.direct.real, rep.direct.imag],
           "T_ffstar_spectral": [rep.spectral.real, rep.spectral.imag],
           "positivity_residual": rep.residual, "positive": positive,
           "growth_ok": growth_ok, "growth_integral": growth_value, **support}
    if cfg.format == "json":
        emit_json(cfg, doc)
    else:
        emit(cfg, {"T_f": np.array([value]), "T_ffstar_direct": np.array([rep.direct]),
                   "T_ffstar_spectral": np.array([rep.spectral]),
                   "positivity_residual": np.array([rep.residual]),
                   "growth_integral": np.array([growth_value]),
                   "growth_ok": np.array([growth_ok])}, {"profile": f.name(), **support})
    return EXIT_OK if positive and growth_ok else EXIT_FAIL


def cmd_verify(cfg):
    path = os.environ.get(calibration.ENV_VAR) or str(calibration.packaged_path())
    if not os.path.exists(path):
        raise DataError(f"no calibration file at {path}; run `sphconv calibrate --out {path}` first")
    use_calibration(path)
    cases = verify.run_all(cfg.quadrature, cfg.seed, cfg.tol)
    doc = {"calibration": path, "seed": cfg.seed, "cases": [c.to_dict() for c in cases],
           "passed": sum(c.passed for c in cases), "total": len(cases)}
    if cfg.format == "csv":
        emit(cfg, {"residual": np.array([c.residual for c in cases]),
                   "tolerance": np.array([c.tolerance for c in cases]),
                   "pass": np.array([c.passed for c in cases])},
             {"cases": [f"{c.suite}: {c.case}" for c in cases]})
    else:
        emit_json(cfg, doc)
    return EXIT_OK if all(c.passed for c in cases) else EXIT_FAIL


def cmd_calibrate(cfg):
    try:
        cal = calibration.compute(cfg.quadrature)
    except calibration.CalibrationError as exc:
        print(f"sphconv calibrate: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    text = cal.to_json()
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write_text(cfg.output, text)
    return EXIT_OK


COMMANDS = {"sphfn": cmd_sphfn, "transform": cmd_transform, "conv": cmd_conv,
            "bochner": cmd_bochner, "verify": cmd_verify, "calibrate": cmd_calibrate}


def build_parser():
    p = argparse.ArgumentParser(prog="sphconv", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--lambda", dest="lam", help="comma-separated spectral parameters, e.g. 0.5,1+0.5i")
    p.add_argument("--t", help="comma-separated radii or start:stop:count")
    p.add_argument("--profile", help="test function, e.g. bump:T=1.5 or gaussian-truncated:sigma=0.4")
    p.add_argument("--measure", help="spectral measure JSON file")
    p.add_argument("--kind", default="spherical",
                   choices=["spherical", "fourier-abel", "abel", "round-trip", "plancherel",
                            "calculus"], help="what `transform` computes")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--tol", type=float, help="override the pass tolerance")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--calibration", help=f"calibration JSON (default ${calibration.ENV_VAR} "
                                         "or the packaged file)")
    p.add_argument("--quad", action="append", metavar="KEY=VALUE",
                   help="quadrature override, e.g. n_t=256 (repeatable)")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.calibration:
            use_calibration(args.calibration)
        cfg = RunConfig(args.command, parse_quadrature(args.quad),
                        parse_lambda_list(args.lam), parse_t_list(args.t),
                        parse_profile(args.profile) if args.profile else None,
                        load_measure(args.measure), args.out, args.format, args.tol,
                        args.seed, args.kind)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"sphconv: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"sphconv: {exc}", file=sys.stderr)
        return EXIT_DATA
    except spherical.SingularParameterError as exc:
        print(json.dumps({"error": "singular spectral parameter",
                          "lambda": [exc.lam.real, exc.lam.imag], "m": exc.m}), file=sys.stderr)
        return EXIT_SINGULAR
    except spherical.IllConditionedFitError as exc:
        print(json.dumps({"error": "c-function fit ill conditioned", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_SINGULAR
    except NonConvergenceError as exc:
        print(f"sphconv: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
