"""Single-band grids, NDVI, multi-date compositing and zonal means.

Grids are north-up. ``origin`` is the upper-left corner and ``values[0]``
is the northernmost row.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .exceptions import AlignmentError, ValidationError
from .geometry import Point2, Polygon, Zone

NODATA = -9999.0
DEFAULT_SCALE = 10000.0


@dataclass(frozen=True, eq=False)
class RasterGrid:
    origin: Point2
    cell_size: float
    values: np.ndarray
    nodata: float = NODATA

    def __post_init__(self):
        if not self.cell_size > 0:
            raise ValidationError("cell size must be positive")
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValidationError("grid values must be a non-empty 2-D array")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "origin", Point2(float(self.origin[0]), float(self.origin[1])))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def columns(self) -> int:
        return self.values.shape[1]

    @property
    def valid(self) -> np.ndarray:
        """True where the cell holds data."""
        return (self.values != self.nodata) & np.isfinite(self.values)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        x0, y0 = self.origin
        return x0, y0 - self.rows * self.cell_size, x0 + self.columns * self.cell_size, y0

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.origin.x + (np.arange(self.columns) + 0.5) * self.cell_size
        y = self.origin.y - (np.arange(self.rows) + 0.5) * self.cell_size
        return x, y

    def aligned_with(self, other: "RasterGrid") -> bool:
        return (self.values.shape == other.values.shape
                and self.cell_size == other.cell_size
                and self.origin == other.origin)

    def __eq__(self, other):
        if not isinstance(other, RasterGrid):
            return NotImplemented
        return (self.aligned_with(other) and self.nodata == other.nodata
                and bool(np.array_equal(self.values, other.values)))

    __hash__ = None  # type: ignore[assignment]


def _check_aligned(grids: Sequence[RasterGrid]) -> None:
    for g in grids[1:]:
        if not grids[0].aligned_with(g):
            raise AlignmentError("grids differ in origin, cell size or shape")


def reflectance(grid: RasterGrid, scale: float = 1.0) -> RasterGrid:
    """Divide a band by ``scale`` (e.g. 10000 for integer-coded products).

    Negative reflectance is rejected.
    """
    if not scale > 0:
        raise ValidationError("scale divisor must be positive")
    ok = grid.valid
    if np.any(grid.values[ok] < 0):
        raise ValidationError("negative reflectance in band grid")
    vals = np.where(ok, grid.values / scale, grid.nodata)
    return replace(grid, values=vals)


def ndvi(nir: RasterGrid, red: RasterGrid, nodata: float = NODATA) -> RasterGrid:
    """(NIR - Red) / (NIR + Red) per cell.

    Cells are nodata where either band is nodata or the sum is zero.
    """
    _check_aligned([nir, red])
    n, r = nir.values, red.values
    den = n + r
    ok = nir.valid & red.valid & (den != 0)
    out = np.full(n.shape, nodata)
    out[ok] = np.clip((n[ok] - r[ok]) / den[ok], -1.0, 1.0)
    return RasterGrid(nir.origin, nir.cell_size, out, nodata)


def composite_mean(grids: Sequence[RasterGrid]) -> RasterGrid:
    """Per-cell mean over the grids where the cell holds data."""
    grids = list(grids)
    if not grids:
        raise ValidationError("no grids to composite")
    _check_aligned(grids)
    if len(grids) == 1:
        return grids[0]
    total = np.zeros(grids[0].values.shape)
    count = np.zeros(grids[0].values.shape)
    for g in grids:
        ok = g.valid
        total[ok] += g.values[ok]
        count[ok] += 1
    nodata = grids[0].nodata
    out = np.full(total.shape, nodata)
    has = count > 0
    out[has] = total[has] / count[has]
    return RasterGrid(grids[0].origin, grids[0].cell_size, out, nodata)


def zonal_values(grid: RasterGrid, zone: Polygon | Zone) -> np.ndarray:
    """Data values of the cells whose center lies in ``zone``."""
    xmin, ymin, xmax, ymax = zone.bounds
    xc, yc = grid.cell_centers()
    cols = np.flatnonzero((xc >= xmin - 1e-9) & (xc <= xmax + 1e-9))
    rows = np.flatnonzero((yc >= ymin - 1e-9) & (yc <= ymax + 1e-9))
    if len(cols) == 0 or len(rows) == 0:
        return np.empty(0)
    sub = grid.values[np.ix_(rows, cols)]
    ok = grid.valid[np.ix_(rows, cols)]
    X, Y = np.meshgrid(xc[cols], yc[rows])
    pts = np.column_stack([X[ok], Y[ok]])
    inside = zone.contains_points(pts)
    return sub[ok][inside]


def zonal_mean(grid: RasterGrid, zone: Polygon | Zone) -> float | None:
    """Mean over cells centered in ``zone``; None if there are none."""
    v = zonal_values(grid, zone)
    return float(v.mean()) if len(v) else None


# ESRI ASCII grid

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "xllcenter", "yllcenter",
                "cellsize", "nodata_value")


def fmt(v: float) -> str:
    """Fixed 9-significant-digit text used by every writer in verdant."""
    s = format(float(v), ".9g")
    return "0" if s == "-0" else s


def read_asc(path: str | os.PathLike) -> RasterGrid:
    with open(path) as f:
        lines = f.read().split("\n")
    header = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if not parts:
            i += 1
            continue
        key = parts[0].lower()
        if key not in _HEADER_KEYS:
            break
        if len(parts) != 2:
            raise ValidationError(f"{path}: line {i + 1}: malformed header line")
        header[key] = parts[1]
        i += 1
    for key in ("ncols", "nrows", "cellsize"):
        if key not in header:
            raise ValidationError(f"{path}: missing header key {key}")
    try:
        ncols, nrows = int(header["ncols"]), int(header["nrows"])
        cell = float(header["cellsize"])
        nodata = float(header.get("nodata_value", NODATA))
        if "xllcorner" in header:
            xll, yll = float(header["xllcorner"]), float(header["yllcorner"])
        elif "xllcenter" in header:
            xll = float(header["xllcenter"]) - cell / 2
            yll = float(header["yllcenter"]) - cell / 2
        else:
            raise ValidationError(f"{path}: missing xllcorner/xllcenter")
        data = np.array(" ".join(lines[i:]).split(), dtype=np.float64)
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"{path}: {exc}") from None
    if data.size != ncols * nrows:
        raise ValidationError(f"{path}: expected {ncols * nrows} values, found {data.size}")
    origin = Point2(xll, yll + nrows * cell)
    return RasterGrid(origin, cell, data.reshape(nrows, ncols), nodata)


def write_asc(path: str | os.PathLike, grid: RasterGrid) -> None:
    x0, ymin = grid.origin.x, grid.bounds[1]
    out = [f"ncols {grid.columns}", f"nrows {grid.rows}", f"xllcorner {fmt(x0)}",
           f"yllcorner {fmt(ymin)}", f"cellsize {fmt(grid.cell_size)}", f"NODATA_value {fmt(grid.nodata)}"]
    out.extend(" ".join(fmt(v) for v in row) for row in grid.values)
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(out) + "\n")
