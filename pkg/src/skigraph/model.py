"""Core domain types: subsegments, edges, nodes, and the resort graph.

Everything here is treated as immutable once a graph has been built; the
builder in :mod:`skigraph.build` is the only code that assembles or
mutates these objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .geo import GeoPoint, polyline_length


class Difficulty(str, Enum):
    EASY = "easy"
    INTERMEDIATE = "intermediate"
    ADVANCED = "advanced"
    FREERIDE = "freeride"


class LiftType(str, Enum):
    T_BAR = "t-bar"
    CHAIR = "chair"
    GONDOLA = "gondola"
    CABLE_CAR = "cable_car"


class TravelTimeSource(str, Enum):
    MEASURED = "measured"
    INTERPOLATED = "interpolated"


@dataclass(frozen=True)
class SubSegment:
    """A short piece of an edge; the unit of attribute and cost evaluation.

    ``steepness`` is a signed percent grade: positive means descending in
    travel direction, negative means uphill. Attribute fields stay None
    until terrain attribution has run (or when sampling failed).
    """

    index: int
    start: GeoPoint
    end: GeoPoint
    length: float
    altitude: float | None = None
    steepness: float | None = None
    compass: str | None = None


@dataclass(frozen=True)
class Node:
    """A junction where edges meet."""

    id: str
    point: GeoPoint

    @property
    def elevation(self) -> float | None:
        return self.point.ele


@dataclass(frozen=True)
class LiftAmenities:
    heated_seats: bool = False
    bubble: bool = False
    occupancy: int | None = None


@dataclass(kw_only=True)
class Edge:
    """Common shape of slope, lift, and helper edges.

    ``geometry`` is ordered in travel direction: top to bottom for slopes,
    bottom to top for lifts.
    """

    id: str
    name: str = ""
    geometry: tuple[GeoPoint, ...]
    from_node: str | None = None
    to_node: str | None = None
    subsegments: tuple[SubSegment, ...] = ()
    median_travel_time: float | None = None
    travel_time_source: TravelTimeSource | None = None

    kind = "edge"

    @property
    def K(self) -> int:
        return len(self.subsegments)

    @property
    def length(self) -> float:
        """Edge length in meters as the sum of subsegment lengths.

        Falls back to the geometry length before segmentation has run.
        """
        if self.subsegments:
            return sum(s.length for s in self.subsegments)
        return polyline_length(self.geometry)


@dataclass(kw_only=True)
class SlopeEdge(Edge):
    declared_difficulty: Difficulty | None = None
    groomed: bool = True
    ref_label: str = ""
    popularity: float | None = None
    attributes_missing: bool = False

    kind = "slope"


@dataclass(kw_only=True)
class LiftEdge(Edge):
    lift_type: LiftType = LiftType.CHAIR
    bidirectional: bool = False
    amenities: LiftAmenities = field(default_factory=LiftAmenities)

    kind = "lift"


@dataclass(kw_only=True)
class HelperEdge(Edge):
    """Synthetic walkable connector inserted during connectivity repair.

    Traversable in both directions; excluded from difficulty statistics
    and rankings.
    """

    attributes_missing: bool = False

    kind = "helper"


@dataclass
class RepairReport:
    dead_ends_before: int
    dead_ends_after: int
    helper_edges_inserted: int
    helpers: list[tuple[str, str, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "dead_ends_before": self.dead_ends_before,
            "dead_ends_after": self.dead_ends_after,
            "helper_edges_inserted": self.helper_edges_inserted,
            "helpers": [
                {"from_node": a, "to_node": b, "length_m": l} for a, b, l in self.helpers
            ],
        }


@dataclass
class ResortGraph:
    """Directed network of slopes and lifts joined at shared junction nodes."""

    name: str = ""
    nodes: dict[str, Node] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    helper_edges: list[HelperEdge] = field(default_factory=list)
    repair_report: RepairReport | None = None

    def all_edges(self) -> Iterator[Edge]:
        yield from self.edges
        yield from self.helper_edges

    def edge(self, edge_id: str) -> Edge:
        for e in self.all_edges():
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def slopes(self) -> list[SlopeEdge]:
        return [e for e in self.edges if isinstance(e, SlopeEdge)]

    def lifts(self) -> list[LiftEdge]:
        return [e for e in self.edges if isinstance(e, LiftEdge)]

    def degree(self, node_id: str) -> int:
        return sum(1 for e in self.all_edges() for nid in (e.from_node, e.to_node) if nid == node_id)

    def bbox(self) -> tuple[float, float, float, float]:
        """(west, south, east, north) over all edge geometry."""
        pts = [p for e in self.all_edges() for p in e.geometry]
        if not pts:
            raise ValueError("graph has no geometry")
        lons = [p.lon for p in pts]
        lats = [p.lat for p in pts]
        return min(lons), min(lats), max(lons), max(lats)
