"""Figure rendering and standalone plot-script emission for run outputs.

A trajectory directory (diagnostics.csv + numbered snapshots + meta.txt)
becomes a space-time heatmap drawn in growing-domain coordinates: each
snapshot row is plotted against x = rho(t) * y, so the widening spatial
extent of the habitat is visible directly.  A single field CSV becomes a
line plot (1D) or a heatmap (2D).

Both a rendered PNG and a standalone plotting script are written; the
script embeds the coordinate scale factors so it needs nothing beyond
numpy and matplotlib to reproduce the figure from the CSVs.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

import numpy as np

from .grids import read_field_csv
from .growth import GrowthFamily, GrowthFunction

__all__ = ["emit_plot", "render_trajectory_heatmap", "render_field_plot"]

_SNAPSHOT_RE = re.compile(r"snapshot_(\d+)_t([0-9.eE+-]+)\.csv$")


def _read_meta(path: Path) -> dict:
    meta = {}
    for line in path.read_text().splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            meta[key.strip()] = value.strip()
    return meta


def _growth_from_meta(meta: dict) -> GrowthFunction:
    family = meta.get("growth_family", "constant")
    if family == GrowthFamily.LOGISTIC.value:
        return GrowthFunction.logistic(float(meta["k"]), float(meta["m"]))
    return GrowthFunction.constant()


def _find_snapshots(traj_dir: Path):
    """Sorted (time, path) pairs for every snapshot CSV in the directory."""
    found = []
    for path in traj_dir.iterdir():
        match = _SNAPSHOT_RE.match(path.name)
        if match:
            found.append((int(match.group(1)), float(match.group(2)), path))
    found.sort()
    return [(t, path) for _, t, path in found]


def _load_trajectory(traj_dir: Path):
    meta_path = traj_dir / "meta.txt"
    if not meta_path.exists():
        raise FileNotFoundError(f"no meta.txt in {traj_dir}")
    meta = _read_meta(meta_path)
    snaps = _find_snapshots(traj_dir)
    if not snaps:
        raise ValueError(f"no snapshots found in {traj_dir}")
    growth = _growth_from_meta(meta)
    times = np.array([t for t, _ in snaps])
    fields = [read_field_csv(path) for _, path in snaps]
    scales = np.array([growth.rho(t) for t in times])
    return meta, times, scales, fields, [path for _, path in snaps]


def render_trajectory_heatmap(traj_dir, png_path) -> Path:
    """Space-time heatmap with the spatial axis in growing coordinates."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    traj_dir = Path(traj_dir)
    meta, times, scales, fields, _ = _load_trajectory(traj_dir)
    grid = fields[0].grid
    if grid.dim == 1:
        y = grid.axis(0)
        X = np.outer(scales, y)
        T = np.repeat(times[:, None], y.size, axis=1)
        C = np.stack([f.values for f in fields])
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        mesh = ax.pcolormesh(X, T, C, shading="gouraud", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="density")
        ax.set_xlabel("x = rho(t) * y")
        ax.set_ylabel("t")
    else:
        # 2D runs: render the final snapshot on the grown domain
        f = fields[-1]
        s = scales[-1]
        y1, y2 = f.grid.axis(0), f.grid.axis(1)
        fig, ax = plt.subplots(figsize=(6.0, 5.0))
        mesh = ax.pcolormesh(
            s * y1, s * y2, f.values.T, shading="gouraud", cmap="viridis"
        )
        fig.colorbar(mesh, ax=ax, label="density")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_title(f"t = {times[-1]:g}")
    fig.suptitle(
        "d={d}, r={r}, K={K}, h={h}".format(
            d=meta.get("d", "?"), r=meta.get("r", "?"),
            K=meta.get("K", "?"), h=meta.get("h", "?"),
        ),
        fontsize=10,
    )
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return Path(png_path)


def render_field_plot(csv_path, png_path) -> Path:
    """Line plot (1D) or heatmap (2D) of a single field CSV."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    f = read_field_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if f.grid.dim == 1:
        ax.plot(f.grid.axis(0), f.values)
        ax.set_xlabel("y")
        ax.set_ylabel("value")
    else:
        mesh = ax.pcolormesh(
            f.grid.axis(0), f.grid.axis(1), f.values.T, shading="gouraud", cmap="viridis"
        )
        fig.colorbar(mesh, ax=ax, label="value")
        ax.set_xlabel("y1")
        ax.set_ylabel("y2")
    ax.set_title(Path(csv_path).stem)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return Path(png_path)


_TRAJECTORY_SCRIPT = '''\
#!/usr/bin/env python3
"""Rebuild the space-time heatmap from the snapshot CSVs in this directory."""
import csv
from pathlib import Path

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
DATA_DIR = (HERE / {data_dir!r}).resolve()
SNAPSHOTS = {snapshots!r}   # (time, coordinate scale rho(t), filename)


def read_field(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    data = np.array([[float(x) for x in row] for row in rows[1:]])
    return data[:, 0], data[:, -1]

times, scales = [], []
coords, values = [], []
for t, scale, name in SNAPSHOTS:
    y, v = read_field(DATA_DIR / name)
    times.append(t)
    scales.append(scale)
    coords.append(scale * y)
    values.append(v)

X = np.array(coords)
T = np.repeat(np.array(times)[:, None], X.shape[1], axis=1)
C = np.array(values)

fig, ax = plt.subplots(figsize=(7.0, 4.5))
mesh = ax.pcolormesh(X, T, C, shading="gouraud", cmap="viridis")
fig.colorbar(mesh, ax=ax, label="density")
ax.set_xlabel("x = rho(t) * y")
ax.set_ylabel("t")
fig.tight_layout()
fig.savefig(HERE / {png_name!r}, dpi=150)
print("wrote", HERE / {png_name!r})
'''

_FIELD_SCRIPT = '''\
#!/usr/bin/env python3
"""Rebuild the field plot from {csv_name}."""
import csv
from pathlib import Path

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
with open((HERE / {csv_rel!r}).resolve(), newline="") as f:
    rows = list(csv.reader(f))
header = rows[0]
data = np.array([[float(x) for x in row] for row in rows[1:]])

fig, ax = plt.subplots(figsize=(6.0, 4.0))
if len(header) == 2:
    ax.plot(data[:, 0], data[:, 1])
    ax.set_xlabel("y")
    ax.set_ylabel("value")
else:
    y1 = np.unique(data[:, 0])
    y2 = np.unique(data[:, 1])
    C = data[:, 2].reshape(y1.size, y2.size)
    mesh = ax.pcolormesh(y1, y2, C.T, shading="gouraud", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="value")
    ax.set_xlabel("y1")
    ax.set_ylabel("y2")
fig.tight_layout()
fig.savefig(HERE / {png_name!r}, dpi=150)
print("wrote", HERE / {png_name!r})
'''


def emit_plot(source, out_dir=None, render: bool = True):
    """Write a standalone plot script (and, by default, the rendered PNG).

    source is either a trajectory output directory or a single field CSV.
    Returns the script path.  Raises FileNotFoundError for a missing input
    and ValueError for a trajectory directory without snapshots.
    """
    source = Path(source)
    if not source.exists():
        raise FileNotFoundError(f"no such trajectory directory or field CSV: {source}")
    if source.is_dir():
        out = Path(out_dir) if out_dir is not None else source
        out.mkdir(parents=True, exist_ok=True)
        _, times, scales, _, paths = _load_trajectory(source)
        snapshots = [
            (float(t), float(s), p.name) for t, s, p in zip(times, scales, paths)
        ]
        script = out / "plot_heatmap.py"
        script.write_text(
            _TRAJECTORY_SCRIPT.format(
                snapshots=snapshots,
                png_name="heatmap.png",
                data_dir=os.path.relpath(source.resolve(), out.resolve()),
            )
        )
        if render:
            render_trajectory_heatmap(source, out / "heatmap.png")
        return script
    out = Path(out_dir) if out_dir is not None else source.parent
    out.mkdir(parents=True, exist_ok=True)
    read_field_csv(source)  # validates the input before emitting anything
    png_name = source.stem + ".png"
    script = out / f"plot_{source.stem}.py"
    script.write_text(
        _FIELD_SCRIPT.format(
            csv_name=source.name,
            csv_rel=os.path.relpath(source.resolve(), out.resolve()),
            png_name=png_name,
        )
    )
    if render:
        render_field_plot(source, out / png_name)
    return script
