"""CSV/JSON serialisation of grids, quadratures and time series.

Floats are written with 17 significant digits so files round-trip
bit-exactly; infinities appear as the literal ``inf``.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .exact.wigner import WignerGrid
from .tomography import QuadratureSet

FLOAT_FMT = "%.17g"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return FLOAT_FMT % x


def write_table(path, header: list[str], columns) -> Path:
    """Write equal-length columns as CSV with a header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [np.asarray(c) if not isinstance(c, list) else c for c in columns]
    n = len(cols[0]) if cols else 0
    with path.open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(fmt(c[i]) for c in cols) + "\n")
    return path


def read_table(path) -> dict[str, np.ndarray]:
    """Numeric CSV into a dict of float arrays; non-numeric columns stay strings."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = np.array(col)
    return out


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_wigner(path, grid: WignerGrid) -> tuple[Path, Path]:
    """``<path>.csv`` with columns q, p, w (q-major) and ``<path>.json`` metadata."""
    path = Path(path)
    csv_path = path.with_suffix(".csv")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    qq, pp = np.meshgrid(grid.q_axis, grid.p_axis, indexing="ij")
    data = np.column_stack([qq.ravel(), pp.ravel(), grid.values.ravel()])
    np.savetxt(csv_path, data, fmt=FLOAT_FMT, delimiter=",", header="q,p,w", comments="")
    meta = {
        "t": grid.t,
        "n_atoms": grid.n_atoms,
        "n_q": int(grid.q_axis.size),
        "n_p": int(grid.p_axis.size),
        "q_range": [float(grid.q_axis[0]), float(grid.q_axis[-1])],
        "p_range": [float(grid.p_axis[0]), float(grid.p_axis[-1])],
        "coordinates": "q = sqrt(N) Q, p = Pi / sqrt(N)",
        "layout": "rows ordered q-major: index = i_q * n_p + i_p",
        **grid.meta,
    }
    json_path = write_json(path.with_suffix(".json"), meta)
    return csv_path, json_path


def read_wigner(path) -> WignerGrid:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    data = np.loadtxt(path.with_suffix(".csv"), delimiter=",", skiprows=1, ndmin=2)
    nq, np_ = meta["n_q"], meta["n_p"]
    values = data[:, 2].reshape(nq, np_)
    q_axis = data[::np_, 0]
    p_axis = data[:np_, 1]
    extra = {k: v for k, v in meta.items() if k not in {"t", "n_atoms", "n_q", "n_p"}}
    return WignerGrid(q_axis, p_axis, values, float(meta["t"]), float(meta["n_atoms"]), extra)


def write_quadratures(path, quads: QuadratureSet) -> Path:
    """Columns angle, x, probability; one block per angle."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n_x = quads.x_axis.size
    data = np.column_stack([
        np.repeat(quads.angles, n_x),
        np.tile(quads.x_axis, quads.angles.size),
        quads.distributions.ravel(),
    ])
    np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",", header="angle,x,probability", comments="")
    return path


def read_quadratures(path) -> QuadratureSet:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    angles = np.unique(data[:, 0])
    n_x = data.shape[0] // angles.size
    x_axis = data[:n_x, 1]
    return QuadratureSet(angles, x_axis, data[:, 2].reshape(angles.size, n_x), np.zeros(angles.size, dtype=int))


def write_samples(path, angles, samples) -> Path:
    """Columns angle, sample_index, value."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = [
        np.column_stack([np.full(len(s), a), np.arange(len(s)), s]) for a, s in zip(angles, samples)
    ]
    data = np.vstack(blocks) if blocks else np.empty((0, 3))
    np.savetxt(path, data, fmt=["%.17g", "%d", "%.17g"], delimiter=",",
               header="angle,sample_index,value", comments="")
    return path
