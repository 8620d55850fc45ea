"""Delimited output tables, run manifests and rendered figures.

Tables are CSV with a two-line header (column names, then units) and fixed
12-significant-digit formatting, so identical runs produce byte-identical
files.  Each run directory gets a ``manifest.json`` echoing the full
configuration, tool version, grid and Courant number.  Figures are PNG
renderings of the same curves the tables carry.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

Column = Tuple[str, str, np.ndarray]   # name, unit, values


def format_number(x: float) -> str:
    return f"{x:.12g}"


def write_table(path: Path, columns: Sequence[Column]) -> Path:
    """Write columns as CSV with a name line and a unit line."""
    names = ",".join(c[0] for c in columns)
    units = ",".join(c[1] for c in columns)
    arrays = [np.asarray(c[2]) for c in columns]
    n = arrays[0].size if arrays else 0
    for name_unit, arr in zip(columns, arrays):
        if arr.size != n:
            raise ValueError(f"column {name_unit[0]!r} has {arr.size} rows, "
                             f"expected {n}")
    lines = [names, units]
    for i in range(n):
        lines.append(",".join(format_number(float(a[i])) for a in arrays))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_manifest(path: Path, payload: Dict) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def _finish(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_snapshots(path: Path, snapshots, title: str,
                   overlay=None, overlay_label: str = "analytic") -> Optional[Path]:
    """Velocity and displacement profiles, one curve per snapshot time.

    ``overlay`` takes a second snapshot list (dashed) for comparisons.
    """
    if not snapshots:
        return None
    fig, (ax_v, ax_u) = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
    for snap in snapshots:
        label = f"t = {snap.t * 1e3:.3g} ms"
        ax_v.plot(snap.z, snap.velocity, lw=1.2, label=label)
        ax_u.plot(snap.z, snap.displacement * 1e3, lw=1.2, label=label)
    if overlay:
        for snap in overlay:
            ax_v.plot(snap.z, snap.velocity, "k--", lw=0.9)
            ax_u.plot(snap.z, snap.displacement * 1e3, "k--", lw=0.9)
        ax_v.plot([], [], "k--", lw=0.9, label=overlay_label)
    ax_v.set_ylabel("velocity [m/s]")
    ax_u.set_ylabel("displacement [mm]")
    ax_u.set_xlabel("z [m]")
    ax_v.set_title(title)
    ax_v.legend(fontsize=8)
    ax_v.grid(alpha=0.3)
    ax_u.grid(alpha=0.3)
    return _finish(fig, path)


def plot_probes(path: Path, probes, title: str,
                overlay=None, overlay_label: str = "analytic") -> Optional[Path]:
    """Displacement and velocity oscillograms, one curve per probe."""
    if not probes or any(p.t.size == 0 for p in probes):
        return None
    fig, (ax_u, ax_v) = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
    for p in probes:
        label = f"z = {p.z:.3g} m"
        ax_u.plot(p.t * 1e3, p.displacement * 1e3, lw=1.0, label=label)
        ax_v.plot(p.t * 1e3, p.velocity, lw=1.0, label=label)
    if overlay:
        for p in overlay:
            ax_u.plot(p.t * 1e3, p.displacement * 1e3, "k--", lw=0.8)
            ax_v.plot(p.t * 1e3, p.velocity, "k--", lw=0.8)
        ax_u.plot([], [], "k--", lw=0.8, label=overlay_label)
    ax_u.set_ylabel("displacement [mm]")
    ax_v.set_ylabel("velocity [m/s]")
    ax_v.set_xlabel("t [ms]")
    ax_u.set_title(title)
    ax_u.legend(fontsize=8)
    ax_u.grid(alpha=0.3)
    ax_v.grid(alpha=0.3)
    return _finish(fig, path)


def plot_sweep(path: Path, x: np.ndarray, y: np.ndarray, xlabel: str,
               fit=None, title: str = "parameter sweep") -> Path:
    """Log-log sweep scatter with the fitted power law, when present."""
    fig, ax = plt.subplots(figsize=(6.5, 5))
    ax.loglog(x, y, "ko", ms=5, label="runs")
    if fit is not None:
        xs = np.geomspace(min(x), max(x), 100)
        ax.loglog(xs, fit.coeff * xs ** fit.exponent, "r-", lw=1.2,
                  label=f"{fit.coeff:.4g} x^{fit.exponent:.4f} "
                        f"(R^2 = {fit.r_squared:.4f})")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("displacement at z = 0 [m]")
    ax.set_title(title)
    ax.grid(alpha=0.3, which="both")
    ax.legend(fontsize=8)
    return _finish(fig, path)
