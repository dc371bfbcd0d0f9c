"""Elevation grid sampling against an independent bilinear oracle."""

import numpy as np
import pytest

from skigraph.dem import ElevationGrid, read_esri_ascii, sample_elevation, write_esri_ascii
from skigraph.errors import AllNoDataError, OutOfBoundsError
from skigraph.geo import GeoPoint

from conftest import make_grid


def bilinear_oracle(v00, v10, v01, v11, fx, fy):
    """Textbook scalar bilinear form; v00 is the lower-left cell."""
    return (
        v00 * (1 - fx) * (1 - fy)
        + v10 * fx * (1 - fy)
        + v01 * (1 - fx) * fy
        + v11 * fx * fy
    )


def test_cell_center_identity():
    grid = make_grid([[2100.0, 2200.0], [2000.0, 2050.0]])
    for row in range(2):
        for col in range(2):
            center = grid.cell_center(col, row)
            assert sample_elevation(grid, center) == pytest.approx(grid.values[row, col], abs=1e-12)


def test_midpoint_is_linear():
    # two cells side by side valued 2000 / 2100, same latitude
    grid = make_grid([[2000.0, 2100.0]])
    a = grid.cell_center(0, 0)
    b = grid.cell_center(1, 0)
    mid = GeoPoint((a.lon + b.lon) / 2, a.lat)
    assert sample_elevation(grid, mid) == pytest.approx(2050.0, abs=1e-9)


def test_fractional_offset_matches_oracle():
    # values laid out: top row (2 cells) then bottom row
    grid = make_grid([[1200.0, 1300.0], [1000.0, 1100.0]])
    fx, fy = 0.25, 0.75
    lower_left = grid.cell_center(0, 1)
    p = GeoPoint(lower_left.lon + fx * grid.cell_size, lower_left.lat + fy * grid.cell_size)
    expected = bilinear_oracle(1000.0, 1100.0, 1200.0, 1300.0, fx, fy)
    assert expected == pytest.approx(1175.0)
    assert sample_elevation(grid, p) == pytest.approx(expected, abs=1e-9)


def test_random_points_match_oracle():
    rng = np.random.RandomState(7)
    values = rng.uniform(1000, 3000, size=(6, 5))
    grid = make_grid(values)
    for _ in range(200):
        col = rng.randint(0, 4)
        row_b = rng.randint(0, 5)  # rows from bottom
        fx, fy = rng.rand(), rng.rand()
        ll = grid.cell_center(col, grid.nrows - 1 - row_b)
        p = GeoPoint(ll.lon + fx * grid.cell_size, ll.lat + fy * grid.cell_size)
        r_top = grid.nrows - 1 - row_b
        expected = bilinear_oracle(
            values[r_top, col],
            values[r_top, col + 1],
            values[r_top - 1, col],
            values[r_top - 1, col + 1],
            fx,
            fy,
        )
        # reconstructing the fraction from degree coordinates costs ~1e-9
        assert sample_elevation(grid, p) == pytest.approx(expected, abs=1e-4)


def test_nodata_renormalization():
    grid = make_grid([[2000.0, -9999.0]])
    a = grid.cell_center(0, 0)
    b = grid.cell_center(1, 0)
    mid = GeoPoint((a.lon + b.lon) / 2, a.lat)
    # the nodata neighbor drops out, leaving the valid value
    assert sample_elevation(grid, mid) == pytest.approx(2000.0)


def test_all_nodata_raises():
    grid = make_grid(np.full((2, 2), -9999.0))
    with pytest.raises(AllNoDataError):
        sample_elevation(grid, grid.cell_center(0, 0))


def test_out_of_bounds_raises():
    grid = make_grid([[2000.0]])
    with pytest.raises(OutOfBoundsError):
        sample_elevation(grid, GeoPoint(10.5, 47.0))


def test_esri_ascii_round_trip(tmp_path):
    rng = np.random.RandomState(3)
    grid = make_grid(rng.uniform(1500, 2500, size=(4, 3)).round(1))
    path = tmp_path / "grid.asc"
    write_esri_ascii(grid, path)
    back = read_esri_ascii(path)
    assert back.ncols == grid.ncols and back.nrows == grid.nrows
    assert back.cell_size == grid.cell_size
    np.testing.assert_allclose(back.values, grid.values)
    p = grid.cell_center(1, 2)
    assert sample_elevation(back, p) == sample_elevation(grid, p)


def test_esri_ascii_header_order(tmp_path):
    path = tmp_path / "grid.asc"
    path.write_text(
        "ncols 2\nnrows 2\nxllcorner 10.0\nyllcorner 47.0\ncellsize 0.5\n"
        "NODATA_value -1\n1 2\n3 4\n"
    )
    grid = read_esri_ascii(path)
    assert grid.nodata == -1
    # top row first: value 1 sits at the north-west cell
    assert sample_elevation(grid, grid.cell_center(0, 0)) == 1
    assert sample_elevation(grid, grid.cell_center(0, 1)) == 3
