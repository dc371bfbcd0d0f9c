"""Elevation grids and bilinear sampling.

Grids follow the ESRI ASCII convention: the origin is the lower-left
corner of the lower-left cell, values are stored row-major with the top
(northernmost) row first, and a sentinel marks missing cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AllNoDataError, BundleParseError, OutOfBoundsError
from .geo import GeoPoint


@dataclass
class ElevationGrid:
    origin: GeoPoint  # lower-left corner of the lower-left cell
    cell_size: float  # degrees
    ncols: int
    nrows: int
    nodata: float
    values: np.ndarray  # shape (nrows, ncols), top row first

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float).reshape(self.nrows, self.ncols)
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")

    def cell_center(self, col: int, row_from_top: int) -> GeoPoint:
        lon = self.origin.lon + (col + 0.5) * self.cell_size
        lat = self.origin.lat + (self.nrows - row_from_top - 0.5) * self.cell_size
        return GeoPoint(lon, lat)

    def contains(self, p: GeoPoint) -> bool:
        return (
            self.origin.lon <= p.lon <= self.origin.lon + self.ncols * self.cell_size
            and self.origin.lat <= p.lat <= self.origin.lat + self.nrows * self.cell_size
        )


def sample_elevation(grid: ElevationGrid, p: GeoPoint) -> float:
    """Bilinear elevation at p from the four surrounding cell centers.

    Nodata cells are dropped and the remaining weights renormalized.
    Points between the boundary and the outermost cell centers clamp to
    the edge cells, so exact cell centers always reproduce their value.
    """
    if not grid.contains(p):
        raise OutOfBoundsError(f"point ({p.lon}, {p.lat}) outside grid")

    gx = (p.lon - grid.origin.lon) / grid.cell_size - 0.5
    gy = (p.lat - grid.origin.lat) / grid.cell_size - 0.5  # rows from bottom
    gx = min(max(gx, 0.0), grid.ncols - 1.0)
    gy = min(max(gy, 0.0), grid.nrows - 1.0)
    j0 = min(int(math.floor(gx)), grid.ncols - 2) if grid.ncols > 1 else 0
    i0 = min(int(math.floor(gy)), grid.nrows - 2) if grid.nrows > 1 else 0
    fx = gx - j0
    fy = gy - i0
    # snap float noise so exact cell centers reproduce their value
    fx = 0.0 if fx < 1e-9 else (1.0 if fx > 1.0 - 1e-9 else fx)
    fy = 0.0 if fy < 1e-9 else (1.0 if fy > 1.0 - 1e-9 else fy)

    j1 = min(j0 + 1, grid.ncols - 1)
    i1 = min(i0 + 1, grid.nrows - 1)
    # rows in the array count from the top
    r0 = grid.nrows - 1 - i0
    r1 = grid.nrows - 1 - i1
    cells = (
        (grid.values[r0, j0], (1.0 - fx) * (1.0 - fy)),
        (grid.values[r0, j1], fx * (1.0 - fy)),
        (grid.values[r1, j0], (1.0 - fx) * fy),
        (grid.values[r1, j1], fx * fy),
    )
    valid = [(float(v), w) for v, w in cells if v != grid.nodata]
    if not valid:
        raise AllNoDataError(f"all cells around ({p.lon}, {p.lat}) are nodata")
    wsum = sum(w for _, w in valid)
    if wsum <= 0.0:
        # the point sits exactly on a nodata center; average what is left
        return sum(v for v, _ in valid) / len(valid)
    return sum(v * w for v, w in valid) / wsum


_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def read_esri_ascii(path: str | Path) -> ElevationGrid:
    """Read an ESRI ASCII grid (corner-registered headers only)."""
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    header: dict[str, float] = {}
    data_start = 0
    for i, ln in enumerate(lines):
        parts = ln.split()
        key = parts[0].lower()
        if key in _HEADER_KEYS and len(parts) == 2:
            header[key] = float(parts[1])
            data_start = i + 1
        else:
            break
    for required in ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize"):
        if required not in header:
            raise BundleParseError(f"missing header key {required.upper()}", str(path))
    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    nodata = header.get("nodata_value", -9999.0)
    raw = " ".join(lines[data_start:]).split()
    if len(raw) != ncols * nrows:
        raise BundleParseError(
            f"expected {ncols * nrows} values, found {len(raw)}", str(path)
        )
    values = np.array(raw, dtype=float).reshape(nrows, ncols)
    return ElevationGrid(
        origin=GeoPoint(header["xllcorner"], header["yllcorner"]),
        cell_size=header["cellsize"],
        ncols=ncols,
        nrows=nrows,
        nodata=nodata,
        values=values,
    )


def write_esri_ascii(grid: ElevationGrid, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"NCOLS {grid.ncols}\n")
        fh.write(f"NROWS {grid.nrows}\n")
        fh.write(f"XLLCORNER {grid.origin.lon}\n")
        fh.write(f"YLLCORNER {grid.origin.lat}\n")
        fh.write(f"CELLSIZE {grid.cell_size}\n")
        fh.write(f"NODATA_VALUE {grid.nodata}\n")
        for row in grid.values:
            fh.write(" ".join(f"{v:g}" for v in row) + "\n")
