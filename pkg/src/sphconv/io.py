"""CSV and JSON output.

CSV files always carry a header row; complex columns are split into
``name_re`` / ``name_im`` pairs and floats are written with 17 significant
digits so they round-trip exactly.  Files are written to a temporary name in
the target directory and renamed into place, so a failed command leaves no
partial output.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

HEADER_PREFIX = "# "


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def fmt(x):
    return format(float(x), ".17g")


def _expand(columns):
    """``{name: array}`` -> flat header and columns, splitting complex ones."""
    names, cols = [], []
    for name, values in columns.items():
        values = np.asarray(values)
        if np.iscomplexobj(values):
            names += [f"{name}_re", f"{name}_im"]
            cols += [values.real, values.imag]
        elif values.dtype == bool:
            names.append(name)
            cols.append(values.astype(int))
        else:
            names.append(name)
            cols.append(values.astype(float))
    return names, cols


def table_to_csv(columns, meta=None):
    """Render ``{name: 1-D array}`` as CSV text, with ``meta`` as a JSON comment line."""
    names, cols = _expand(columns)
    buf = io.StringIO()
    if meta is not None:
        buf.write(HEADER_PREFIX + json.dumps(meta, sort_keys=True, default=str) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*cols):
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def table_to_json(columns, meta=None):
    rows = []
    names, cols = _expand(columns)
    for row in zip(*cols):
        rows.append({n: float(v) for n, v in zip(names, row)})
    doc = {"meta": meta or {}, "columns": names, "rows": rows}
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def write_table(path, columns, fmt_="csv", meta=None):
    text = table_to_csv(columns, meta) if fmt_ == "csv" else table_to_json(columns, meta)
    atomic_write_text(path, text)
    return text


def read_csv(path_or_text):
    """Parse a CSV written by :func:`table_to_csv`; returns ``(meta, {name: array})``.

    ``_re`` / ``_im`` pairs are recombined into complex arrays.
    """
    text = path_or_text
    if isinstance(path_or_text, Path) or "\n" not in str(path_or_text):
        text = Path(path_or_text).read_text()
    lines = text.splitlines()
    meta = None
    if lines and lines[0].startswith(HEADER_PREFIX):
        meta = json.loads(lines[0][len(HEADER_PREFIX):])
        lines = lines[1:]
    rows = list(csv.reader(lines))
    names = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:]]).reshape(-1, len(names))
    out = {}
    for j, name in enumerate(names):
        if name.endswith("_im") and name[:-3] + "_re" in names:
            continue
        if name.endswith("_re") and name[:-3] + "_im" in names:
            out[name[:-3]] = data[:, j] + 1j * data[:, names.index(name[:-3] + "_im")]
        else:
            out[name] = data[:, j]
    return meta, out


# ----------------------------------------------------------- domain objects


def spectral_function_csv(b):
    lam = np.asarray(b.grid, dtype=complex)
    return table_to_csv({"lambda": lam, "value": np.asarray(b.values, dtype=complex)})


def spectral_function_json(b):
    lam = np.asarray(b.grid, dtype=complex)
    vals = np.asarray(b.values, dtype=complex)
    return json.dumps({"lambda": [[z.real, z.imag] for z in lam],
                       "value": [[z.real, z.imag] for z in vals]}, indent=2) + "\n"


def radial_function_csv(f, n=257):
    t = np.linspace(0.0, f.support_radius, n)
    v = f(t)
    return table_to_csv({"t": t, "value": v}, {"profile": f.name(),
                                              "support_radius": f.support_radius})


def convolution_field_csv(field):
    meta = {"lambda": [field.lam.real, field.lam.imag], "f": field.f_ref,
            "quadrature": field.quadrature}
    return table_to_csv({"t": field.t, "value": field.values}, meta)
