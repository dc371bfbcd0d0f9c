"""Density raster checks with a quadrature oracle for the kernel mass."""

import math

import numpy as np
import pytest

from skigraph.errors import EmptyRegionError
from skigraph.geo import GeoPoint
from skigraph.heatmap import kde_raster, png_bytes, write_png

import fixture_resorts as fr


BBOX_M = 400.0


def bbox_around_anchor():
    west = fr.pt(-BBOX_M / 2, 0).lon
    east = fr.pt(BBOX_M / 2, 0).lon
    south = fr.pt(0, -BBOX_M / 2).lat
    north = fr.pt(0, BBOX_M / 2).lat
    return (west, south, east, north)


def gaussian_mass_oracle(points_xy, bbox_m, bandwidth, step=1.0):
    """Numeric integration of the continuous kernel mixture over the box."""
    xs = np.arange(-bbox_m / 2, bbox_m / 2, step) + step / 2
    ys = xs.copy()
    gx, gy = np.meshgrid(xs, ys)
    total = 0.0
    for px, py in points_xy:
        pdf = np.exp(-((gx - px) ** 2 + (gy - py) ** 2) / (2 * bandwidth**2))
        total += pdf.sum() * step * step / (2 * math.pi * bandwidth**2)
    return total


def test_single_point_peak_and_decay():
    raster = kde_raster([fr.pt(0, 0)], bbox_around_anchor(), bandwidth=15.0, cell=5.0)
    peak_row, peak_col = np.unravel_index(np.argmax(raster.density), raster.density.shape)
    # the anchor sits in the middle of the box
    assert abs(peak_row - raster.density.shape[0] / 2) <= 1.5
    assert abs(peak_col - raster.density.shape[1] / 2) <= 1.5
    assert raster.normalized.max() == 1.0
    # radial decay: rings at growing distance carry less density
    center = raster.density[peak_row, peak_col]
    for off in (2, 4, 8):
        assert raster.density[peak_row, peak_col + off] < raster.density[peak_row, peak_col + off - 1]
    assert center == raster.density.max()


def test_two_clusters_equal_intensity():
    cluster_a = [fr.pt(-100 + dx, 0) for dx in (0.0, 1.0, -1.0)]
    cluster_b = [fr.pt(100 + dx, 0) for dx in (0.0, 1.0, -1.0)]
    raster = kde_raster(cluster_a + cluster_b, bbox_around_anchor())
    h, w = raster.density.shape
    left = raster.density[:, : w // 2].max()
    right = raster.density[:, w // 2 :].max()
    assert left == pytest.approx(right, rel=1e-6)
    assert raster.normalized.max() == 1.0


def test_total_mass_matches_point_count_and_oracle():
    rng = np.random.RandomState(8)
    points_xy = [(float(x), float(y)) for x, y in rng.uniform(-80, 80, size=(40, 2))]
    points = [fr.pt(x, y) for x, y in points_xy]
    raster = kde_raster(points, bbox_around_anchor(), bandwidth=15.0, cell=5.0)
    mass = raster.density.sum()
    assert mass == pytest.approx(len(points), rel=0.01)
    oracle = gaussian_mass_oracle(points_xy, BBOX_M, 15.0)
    assert mass == pytest.approx(oracle, rel=0.01)


def test_empty_region_raises():
    with pytest.raises(EmptyRegionError):
        kde_raster([fr.pt(5000, 5000)], bbox_around_anchor())


def test_png_and_world_file(tmp_path):
    raster = kde_raster([fr.pt(0, 0), fr.pt(30, 40)], bbox_around_anchor())
    out = tmp_path / "heat.png"
    write_png(raster, out)
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert data == png_bytes(raster)
    world = (tmp_path / "heat.pngw").read_text().splitlines()
    assert len(world) == 6
    assert float(world[0]) == pytest.approx(raster.cell_deg_lon)
    assert float(world[3]) == pytest.approx(-raster.cell_deg_lat)
    # world file anchors the center of the top-left pixel
    assert float(world[4]) == pytest.approx(raster.west + raster.cell_deg_lon / 2)
    assert float(world[5]) == pytest.approx(raster.north - raster.cell_deg_lat / 2)

    from PIL import Image

    img = Image.open(out)
    assert img.size == (raster.density.shape[1], raster.density.shape[0])
    assert img.mode == "L"
