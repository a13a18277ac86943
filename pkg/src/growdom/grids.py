"""Uniform tensor grids on the fixed reference domain with Dirichlet zero boundary.

Only interior nodes are stored; the boundary value is identically zero and
enters the Laplacian stencil as an implicit ghost.  Grids are intervals
(dim 1) or axis-aligned rectangles (dim 2) with per-axis spacing
L / (N + 1) for N interior nodes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "build_grid",
    "laplacian",
    "sup_norm",
    "mass",
    "inner",
    "write_field_csv",
    "read_field_csv",
]

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class Grid:
    """Interior nodes of a uniform grid on (0, L1) [x (0, L2)]."""

    extents: tuple
    npoints: tuple

    def __post_init__(self):
        extents = tuple(float(L) for L in np.atleast_1d(self.extents))
        npoints = tuple(int(n) for n in np.atleast_1d(self.npoints))
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "npoints", npoints)
        if len(extents) != len(npoints):
            raise ValueError("extents and npoints must have the same length")
        if not 1 <= len(extents) <= 2:
            raise ValueError("only 1D and 2D grids are supported")
        if any(L <= 0 for L in extents):
            raise ValueError("extents must be positive")
        if any(n < 3 for n in npoints):
            raise ValueError("need at least 3 interior nodes per axis")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def spacing(self) -> tuple:
        return tuple(L / (n + 1) for L, n in zip(self.extents, self.npoints))

    @property
    def shape(self) -> tuple:
        return self.npoints

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis(self, a: int) -> np.ndarray:
        """Interior node coordinates along axis a: dy, 2 dy, ..., N dy."""
        dy = self.spacing[a]
        return dy * np.arange(1, self.npoints[a] + 1)

    def meshgrid(self):
        return np.meshgrid(*(self.axis(a) for a in range(self.dim)), indexing="ij")


def build_grid(dim: int, extents, points_per_axis) -> Grid:
    """Validated grid constructor; dim must match the given axis counts."""
    g = Grid(tuple(extents), tuple(points_per_axis))
    if g.dim != dim:
        raise ValueError(f"dim={dim} inconsistent with {len(g.extents)} axis specs")
    return g


@dataclass
class Field:
    """Real values on the interior nodes of a grid (boundary implicitly zero).

    Treated as an immutable snapshot: operations return new Fields and never
    modify their inputs.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        self.values = vals

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))


def _second_difference(vals: np.ndarray, axis: int) -> np.ndarray:
    """v[i-1] - 2 v[i] + v[i+1] along one axis with zero ghost nodes."""
    v = np.moveaxis(vals, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = v[:-2] - 2.0 * v[1:-1] + v[2:]
    out[0] = -2.0 * v[0] + v[1]
    out[-1] = v[-2] - 2.0 * v[-1]
    return np.moveaxis(out, 0, axis)


def laplacian(v: Field) -> Field:
    """Second-order central-difference Laplacian with zero Dirichlet data."""
    out = np.zeros_like(v.values)
    for a, dy in enumerate(v.grid.spacing):
        out += _second_difference(v.values, a) / dy**2
    return Field(v.grid, out)


def sup_norm(v: Field) -> float:
    return float(np.max(np.abs(v.values)))


def mass(v: Field) -> float:
    """Trapezoidal-rule integral over the domain (boundary contributes zero)."""
    return float(np.sum(v.values) * v.grid.cell_volume)


def inner(a: Field, b: Field) -> float:
    """Cell-volume-weighted inner product; makes the Laplacian symmetric."""
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    return float(np.sum(a.values * b.values) * a.grid.cell_volume)


def write_field_csv(v: Field, path) -> None:
    """One node per row, coordinates then value, 17 significant digits."""
    g = v.grid
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        if g.dim == 1:
            w.writerow(["y1", "value"])
            y = g.axis(0)
            for i in range(g.npoints[0]):
                w.writerow([FLOAT_FMT % y[i], FLOAT_FMT % v.values[i]])
        else:
            w.writerow(["y1", "y2", "value"])
            y1, y2 = g.axis(0), g.axis(1)
            for i in range(g.npoints[0]):
                for j in range(g.npoints[1]):
                    w.writerow([FLOAT_FMT % y1[i], FLOAT_FMT % y2[j], FLOAT_FMT % v.values[i, j]])


def read_field_csv(path) -> Field:
    """Rebuild a Field (and its grid) from a file written by write_field_csv."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise ValueError(f"empty field file: {path}")
    header, data = rows[0], rows[1:]
    if header[-1] != "value" or len(header) not in (2, 3):
        raise ValueError(f"not a field CSV (header {header}): {path}")
    cols = np.array([[float(x) for x in row] for row in data])
    if len(header) == 2:
        y = cols[:, 0]
        n = y.size
        dy = y[0]
        grid = Grid((dy * (n + 1),), (n,))
        return Field(grid, cols[:, 1])
    y1 = np.unique(cols[:, 0])
    y2 = np.unique(cols[:, 1])
    n1, n2 = y1.size, y2.size
    if n1 * n2 != cols.shape[0]:
        raise ValueError(f"ragged 2D field CSV: {path}")
    grid = Grid((y1[0] * (n1 + 1), y2[0] * (n2 + 1)), (n1, n2))
    return Field(grid, cols[:, 2].reshape(n1, n2))
