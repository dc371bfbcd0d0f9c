"""Traffic density rasters from trajectory points.

Points are binned onto a metric cell grid and smoothed with a Gaussian
kernel, so the raw raster integrates to roughly the number of interior
points. A grayscale PNG plus a world-file sidecar make the result usable
in any mapping tool.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from .errors import EmptyRegionError
from .geo import EARTH_RADIUS_M, GeoPoint

DEFAULT_BANDWIDTH_M = 15.0
DEFAULT_CELL_M = 5.0


@dataclass
class HeatmapRaster:
    density: np.ndarray  # expected point count per cell, top row first
    normalized: np.ndarray  # density / max, in [0, 1]
    west: float
    north: float
    cell_deg_lon: float
    cell_deg_lat: float
    cell_m: float
    n_points: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.density.shape


def kde_raster(
    points: Sequence[GeoPoint],
    bbox: tuple[float, float, float, float],
    bandwidth: float = DEFAULT_BANDWIDTH_M,
    cell: float = DEFAULT_CELL_M,
) -> HeatmapRaster:
    """Gaussian kernel density of points over a (west, south, east, north) box.

    The density raster preserves total mass for points away from the
    border; the normalized raster rescales the peak cell to 1.
    """
    west, south, east, north = bbox
    inside = [p for p in points if west <= p.lon <= east and south <= p.lat <= north]
    if not inside:
        raise EmptyRegionError("no trajectory points inside the bounding box")

    lat_mid = math.radians((south + north) / 2.0)
    m_per_deg_lat = math.pi / 180.0 * EARTH_RADIUS_M
    m_per_deg_lon = m_per_deg_lat * math.cos(lat_mid)
    width_m = (east - west) * m_per_deg_lon
    height_m = (north - south) * m_per_deg_lat
    ncols = max(1, int(math.ceil(width_m / cell)))
    nrows = max(1, int(math.ceil(height_m / cell)))

    counts = np.zeros((nrows, ncols))
    for p in inside:
        col = min(int((p.lon - west) * m_per_deg_lon / cell), ncols - 1)
        row = min(int((north - p.lat) * m_per_deg_lat / cell), nrows - 1)
        counts[row, col] += 1.0

    density = gaussian_filter(counts, sigma=bandwidth / cell, mode="constant")
    peak = density.max()
    normalized = density / peak if peak > 0 else density
    return HeatmapRaster(
        density=density,
        normalized=normalized,
        west=west,
        north=north,
        cell_deg_lon=cell / m_per_deg_lon,
        cell_deg_lat=cell / m_per_deg_lat,
        cell_m=cell,
        n_points=len(inside),
    )


def png_bytes(raster: HeatmapRaster) -> bytes:
    """Encode the normalized raster as 8-bit grayscale PNG."""
    img = Image.fromarray((raster.normalized * 255.0).round().astype(np.uint8), mode="L")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def write_png(raster: HeatmapRaster, path: str | Path) -> None:
    """Write the normalized raster as 8-bit grayscale with a world file."""
    Path(path).write_bytes(png_bytes(raster))
    world = Path(path).with_suffix(Path(path).suffix + "w")
    # world file: x scale, rotations, negative y scale, center of the top-left pixel
    world.write_text(
        "\n".join(
            [
                f"{raster.cell_deg_lon:.12f}",
                "0.0",
                "0.0",
                f"{-raster.cell_deg_lat:.12f}",
                f"{raster.west + raster.cell_deg_lon / 2.0:.12f}",
                f"{raster.north - raster.cell_deg_lat / 2.0:.12f}",
            ]
        )
        + "\n"
    )
