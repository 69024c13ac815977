"""CSV and SVG writers with deterministic output."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def write_csv(path, header, columns):
    """Write equal-length columns with full float precision."""
    cols = [np.asarray(c) for c in columns]
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("columns differ in length")
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(n):
            w.writerow([_fmt(c[i]) for c in cols])
    return path


def read_csv(path):
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float) if body else np.empty((0, len(header)))
    return header, data


def _fmt(v):
    if isinstance(v, (str, np.str_)):
        return str(v)
    return repr(float(v))


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "varhbar"
    matplotlib.rcParams["svg.fonttype"] = "none"
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    return Path(path)


def orbit_svg(path, x1, y1, x2, y2, title=""):
    """Orbit plot with axes in units of 1e9 m."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(np.asarray(x1) / 1e9, np.asarray(y1) / 1e9, lw=0.8, label="body 1")
    ax.plot(np.asarray(x2) / 1e9, np.asarray(y2) / 1e9, lw=0.8, label="body 2")
    ax.set_aspect("equal")
    ax.set_xlabel("x [1e9 m]")
    ax.set_ylabel("y [1e9 m]")
    ax.set_title(title, fontsize=9)
    ax.legend(fontsize=8)
    out = _save(fig, path)
    plt.close(fig)
    return out


def curve_svg(path, x, y, xlabel, ylabel, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, y, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=9)
    ax.grid(alpha=0.3)
    out = _save(fig, path)
    plt.close(fig)
    return out
