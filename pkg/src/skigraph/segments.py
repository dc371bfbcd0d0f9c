"""Subsegmentation and per-segment terrain attributes.

Edges are split into short equidistant pieces by walking the polyline
arc length; every piece then gets altitude, signed steepness, and a
compass bin from the elevation grid.
"""

from __future__ import annotations

import math
from typing import Sequence

from .dem import ElevationGrid, sample_elevation
from .errors import DegenerateGeometryError, NotApplicableError, SkigraphError
from .geo import GeoPoint, bearing, compass_bin, cumulative_lengths, interpolate, point_at
from .model import Difficulty, Edge, SubSegment

DEFAULT_STEP_M = 30.0

#: Steepness bands (percent) backing the difficulty classes. The advanced
#: band is open-ended.
DIFFICULTY_BANDS: dict[Difficulty, tuple[float, float]] = {
    Difficulty.EASY: (0.0, 25.0),
    Difficulty.INTERMEDIATE: (25.0, 40.0),
    Difficulty.ADVANCED: (40.0, math.inf),
}


def segmentize(geometry: Sequence[GeoPoint], step: float = DEFAULT_STEP_M) -> list[SubSegment]:
    """Cut a polyline into consecutive pieces of horizontal length ``step``.

    The walk follows the polyline arc length, so the pieces cover the
    geometry exactly. A final remainder shorter than ``step / 2`` is
    merged into the previous piece instead of producing a sliver.
    """
    if len(geometry) < 2:
        raise DegenerateGeometryError("polyline needs at least 2 points")
    cum = cumulative_lengths(geometry)
    total = cum[-1]
    if total <= 0.0:
        raise DegenerateGeometryError("polyline has zero length")

    cuts = [0.0]
    while cuts[-1] + step < total - 1e-9:
        cuts.append(cuts[-1] + step)
    cuts.append(total)
    # drop the last interior cut when the remainder is a sliver
    if len(cuts) > 2 and cuts[-1] - cuts[-2] < step / 2.0 - 1e-9:
        del cuts[-2]

    segs = []
    for k, (s0, s1) in enumerate(zip(cuts, cuts[1:])):
        segs.append(
            SubSegment(
                index=k,
                start=point_at(geometry, cum, s0),
                end=point_at(geometry, cum, s1),
                length=s1 - s0,
            )
        )
    return segs


def attribute_segment(seg: SubSegment, grid: ElevationGrid) -> SubSegment:
    """Return the segment with altitude, steepness, and compass filled in.

    Steepness is 100 * (ele(start) - ele(end)) / horizontal length, so a
    descent in travel direction is positive and an uphill stretch is
    negative. Elevation errors propagate to the caller.
    """
    ele_start = sample_elevation(grid, seg.start)
    ele_end = sample_elevation(grid, seg.end)
    mid = interpolate(seg.start, seg.end, 0.5)
    return SubSegment(
        index=seg.index,
        start=seg.start,
        end=seg.end,
        length=seg.length,
        altitude=sample_elevation(grid, mid),
        steepness=100.0 * (ele_start - ele_end) / seg.length,
        compass=compass_bin(bearing(seg.start, seg.end)),
    )


def attribute_edge(edge: Edge, grid: ElevationGrid, step: float = DEFAULT_STEP_M) -> bool:
    """Segmentize an edge and attribute every piece in place.

    Pieces whose endpoints cannot be sampled keep None attributes; the
    edge is flagged instead of aborted. Returns True when every piece got
    attributes.
    """
    segs = segmentize(edge.geometry, step=step)
    attributed = []
    complete = True
    for seg in segs:
        try:
            attributed.append(attribute_segment(seg, grid))
        except SkigraphError:
            attributed.append(seg)
            complete = False
    edge.subsegments = tuple(attributed)
    if hasattr(edge, "attributes_missing"):
        edge.attributes_missing = not complete
    return complete


def max_downhill_steepness(subsegments: Sequence[SubSegment]) -> float:
    """Steepest descending piece in percent; uphill pieces are ignored."""
    values = [s.steepness for s in subsegments if s.steepness is not None and s.steepness > 0]
    return max(values, default=0.0)


def classify_difficulty(max_steepness: float) -> Difficulty:
    """Difficulty class from the steepest descending piece.

    Both band boundaries are inclusive on the easier side: up to 25 is
    easy, up to 40 intermediate, anything steeper advanced.
    """
    if max_steepness <= 25.0:
        return Difficulty.EASY
    if max_steepness <= 40.0:
        return Difficulty.INTERMEDIATE
    return Difficulty.ADVANCED


def steepness_class(steepness: float) -> str:
    """Band label for a signed steepness; negative values are uphill."""
    if steepness < 0.0:
        return "uphill"
    return classify_difficulty(steepness).value


def discrepancy(seg: SubSegment, declared: Difficulty) -> float:
    """Signed deviation of a segment's steepness from its declared band.

    Zero inside the band, positive when steeper than declared, negative
    when flatter. Freeride edges have no band.
    """
    if declared == Difficulty.FREERIDE:
        raise NotApplicableError("freeride slopes carry no declared steepness band")
    if seg.steepness is None:
        raise NotApplicableError("segment has no steepness attribute")
    lo, hi = DIFFICULTY_BANDS[declared]
    if seg.steepness > hi:
        return seg.steepness - hi
    if seg.steepness < lo:
        return seg.steepness - lo
    return 0.0
