import numpy as np
import pytest

from skigraph.dem import ElevationGrid
from skigraph.geo import GeoPoint

import fixture_resorts as fr


@pytest.fixture
def five_slope():
    return fr.five_slope_resort()


@pytest.fixture
def golden_prefs():
    from skigraph.prefs import PreferenceSet

    return PreferenceSet.from_json(fr.GOLDEN_PREFS_JSON)


@pytest.fixture(scope="session")
def matching():
    return fr.matching_resort()


def make_grid(values, origin=GeoPoint(9.996, 46.996), cell=0.001, nodata=-9999.0):
    values = np.asarray(values, dtype=float)
    return ElevationGrid(
        origin=origin,
        cell_size=cell,
        ncols=values.shape[1],
        nrows=values.shape[0],
        nodata=nodata,
        values=values,
    )


@pytest.fixture
def flat_grid():
    return make_grid(np.full((8, 8), 2000.0))
