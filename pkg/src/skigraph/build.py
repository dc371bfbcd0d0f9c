"""Network construction: geodata ingestion, topology, and connectivity repair.

The build is single-threaded; consumers downstream treat the finished
:class:`~skigraph.model.ResortGraph` as an immutable snapshot.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .dem import ElevationGrid, sample_elevation
from .errors import SkigraphError
from .geo import GeoPoint, distance
from .model import (
    Difficulty,
    Edge,
    HelperEdge,
    LiftAmenities,
    LiftEdge,
    LiftType,
    Node,
    RepairReport,
    ResortGraph,
    SlopeEdge,
)
from .segments import attribute_edge, classify_difficulty, max_downhill_steepness

SNAP_TOLERANCE_M = 1.0
REPAIR_RADIUS_M = 30.0

_DIFFICULTY_ALIASES = {
    "novice": Difficulty.EASY,
    "easy": Difficulty.EASY,
    "intermediate": Difficulty.INTERMEDIATE,
    "advanced": Difficulty.ADVANCED,
    "expert": Difficulty.ADVANCED,
    "freeride": Difficulty.FREERIDE,
}

_LIFT_ALIASES = {
    "t-bar": "t-bar",
    "drag_lift": "t-bar",
    "platter": "t-bar",
    "chair_lift": "chair",
    "chair": "chair",
    "gondola": "gondola",
    "mixed_lift": "gondola",
    "cable_car": "cable_car",
}

#: piste:grooming values that mean the slope is left ungroomed
_UNGROOMED_TAGS = {"mogul", "backcountry", "no", "ungroomed"}


@dataclass
class RawFeature:
    """One geodata feature before normalization."""

    geometry: list[GeoPoint]
    kind: str | None  # "slope" | "lift" | None when undetected
    tags: dict[str, str] = field(default_factory=dict)


@dataclass
class Rejection:
    feature: str
    reason: str


def load_features(path: str | Path) -> list[RawFeature]:
    """Read slope/lift features from GeoJSON or the native fixture schema."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("type") == "FeatureCollection":
        return geojson_features(doc)
    return native_features(doc)


def geojson_features(doc: dict) -> list[RawFeature]:
    """Map a GeoJSON FeatureCollection with OSM-style tags to raw features."""
    out = []
    for feat in doc.get("features", []):
        geom = feat.get("geometry") or {}
        props = {str(k): str(v) for k, v in (feat.get("properties") or {}).items()}
        if geom.get("type") != "LineString":
            out.append(RawFeature(geometry=[], kind=None, tags=props))
            continue
        points = []
        ok = True
        for coord in geom.get("coordinates", []):
            try:
                points.append(GeoPoint(float(coord[0]), float(coord[1])))
            except (TypeError, ValueError, IndexError):
                ok = False
                break
        kind = None
        if "aerialway" in props:
            kind = "lift"
        elif props.get("piste:type") == "downhill":
            kind = "slope"
        out.append(RawFeature(geometry=points if ok else [], kind=kind, tags=props))
    return out


def native_features(doc: dict) -> list[RawFeature]:
    """Simplified fixture schema: {"features": [{kind, geometry, ...tags}]}."""
    out = []
    for feat in doc.get("features", []):
        points = [GeoPoint(float(c[0]), float(c[1])) for c in feat.get("geometry", [])]
        tags = {k: str(v) for k, v in feat.items() if k not in ("geometry", "kind")}
        out.append(RawFeature(geometry=points, kind=feat.get("kind"), tags=tags))
    return out


def _feature_label(feature: RawFeature, index: int) -> str:
    return feature.tags.get("name") or feature.tags.get("ref") or f"feature[{index}]"


def _endpoint_elevation(p: GeoPoint, grid: ElevationGrid) -> float:
    return sample_elevation(grid, p)


def ingest(
    features: Sequence[RawFeature], grid: ElevationGrid
) -> tuple[list[Edge], list[Rejection]]:
    """Normalize raw features into oriented, id-stamped edges.

    Slopes are oriented top to bottom and lifts bottom to top using the
    elevation grid at the endpoints. Features with unusable geometry or
    an unknown kind land on the reject list; ingestion never aborts.
    """
    edges: list[Edge] = []
    rejects: list[Rejection] = []
    for i, feat in enumerate(features):
        label = _feature_label(feat, i)
        if feat.kind not in ("slope", "lift"):
            rejects.append(Rejection(label, "unknown kind"))
            continue
        if len(feat.geometry) < 2:
            rejects.append(Rejection(label, "bad geometry"))
            continue
        try:
            ele_first = _endpoint_elevation(feat.geometry[0], grid)
            ele_last = _endpoint_elevation(feat.geometry[-1], grid)
        except SkigraphError as exc:
            rejects.append(Rejection(label, f"endpoint not sampleable: {exc}"))
            continue

        geometry = list(feat.geometry)
        tags = feat.tags
        if feat.kind == "slope":
            if ele_first < ele_last:
                geometry.reverse()
            difficulty = _DIFFICULTY_ALIASES.get(tags.get("piste:difficulty", tags.get("difficulty", "")).lower())
            grooming_tag = tags.get("piste:grooming", tags.get("grooming", "")).lower()
            groomed = grooming_tag not in _UNGROOMED_TAGS
            if difficulty == Difficulty.FREERIDE:
                groomed = False
            edges.append(
                SlopeEdge(
                    id="",
                    name=tags.get("name", ""),
                    ref_label=tags.get("ref", ""),
                    geometry=tuple(geometry),
                    declared_difficulty=difficulty,
                    groomed=groomed,
                )
            )
        else:
            if ele_first > ele_last:
                geometry.reverse()
            lift_raw = tags.get("aerialway", tags.get("lift_type", "")).lower()
            lift_type = _LIFT_ALIASES.get(lift_raw)
            if lift_type is None:
                rejects.append(Rejection(label, f"unknown lift type: {lift_raw or 'none'}"))
                continue
            occupancy = tags.get("aerialway:occupancy", tags.get("occupancy"))
            edges.append(
                LiftEdge(
                    id="",
                    name=tags.get("name", ""),
                    geometry=tuple(geometry),
                    lift_type=LiftType(lift_type),
                    bidirectional=tags.get("oneway", "").lower() == "no",
                    amenities=LiftAmenities(
                        heated_seats=tags.get("aerialway:heating", "").lower() == "yes",
                        bubble=tags.get("aerialway:bubble", "").lower() == "yes",
                        occupancy=int(occupancy) if occupancy and occupancy.isdigit() else None,
                    ),
                )
            )

    # canonical ordering makes edge ids independent of input order
    def sort_key(e: Edge):
        head = e.geometry[0]
        tail = e.geometry[-1]
        return (e.kind, round(head.lon, 7), round(head.lat, 7), round(tail.lon, 7), round(tail.lat, 7), e.name)

    edges.sort(key=sort_key)
    counters = {"slope": 0, "lift": 0}
    for e in edges:
        prefix = "s" if e.kind == "slope" else "l"
        e.id = f"{prefix}{counters[e.kind]:03d}"
        counters[e.kind] += 1
    return edges, rejects


def build_topology(
    edges: Sequence[Edge], snap_tolerance: float = SNAP_TOLERANCE_M, name: str = ""
) -> ResortGraph:
    """Collapse nearby edge endpoints into shared nodes.

    Endpoints within ``snap_tolerance`` meters merge into one node placed
    at the cluster centroid. Node ids are assigned in lon/lat order, so
    the result does not depend on input edge order.
    """
    endpoints: list[tuple[GeoPoint, int, int]] = []  # (point, edge index, end 0/1)
    for i, e in enumerate(edges):
        endpoints.append((e.geometry[0], i, 0))
        endpoints.append((e.geometry[-1], i, 1))
    endpoints.sort(key=lambda t: (t[0].lon, t[0].lat, t[1], t[2]))

    clusters: list[list[GeoPoint]] = []
    assignment: dict[tuple[int, int], int] = {}
    for p, ei, end in endpoints:
        best = None
        best_dist = snap_tolerance
        for ci, members in enumerate(clusters):
            centroid = _centroid(members)
            d = distance(p, centroid)
            if d <= best_dist:
                best = ci
                best_dist = d
        if best is None:
            clusters.append([p])
            assignment[(ei, end)] = len(clusters) - 1
        else:
            clusters[best].append(p)
            assignment[(ei, end)] = best

    centroids = [_centroid(members) for members in clusters]
    order = sorted(range(len(clusters)), key=lambda ci: (centroids[ci].lon, centroids[ci].lat))
    node_ids = {ci: f"n{rank:03d}" for rank, ci in enumerate(order)}

    graph = ResortGraph(name=name)
    for ci in order:
        nid = node_ids[ci]
        graph.nodes[nid] = Node(id=nid, point=centroids[ci])
    for i, e in enumerate(edges):
        e.from_node = node_ids[assignment[(i, 0)]]
        e.to_node = node_ids[assignment[(i, 1)]]
        graph.edges.append(e)
    return graph


def _centroid(points: list[GeoPoint]) -> GeoPoint:
    return GeoPoint(
        sum(p.lon for p in points) / len(points),
        sum(p.lat for p in points) / len(points),
    )


def repair_connectivity(
    graph: ResortGraph,
    radius: float = REPAIR_RADIUS_M,
    grid: ElevationGrid | None = None,
) -> tuple[ResortGraph, RepairReport]:
    """Bridge small gaps at dead ends with synthetic walkable connectors.

    Every degree-1 node is paired with its closest unconnected neighbor
    within ``radius``; pairs are taken greedily by ascending gap so each
    dead end gains at most one helper. Running the repair twice inserts
    nothing new.
    """
    dead_before = _dead_ends(graph)
    connected = {frozenset((e.from_node, e.to_node)) for e in graph.all_edges()}

    candidates = []
    for nid in dead_before:
        a = graph.nodes[nid]
        for other_id, other in graph.nodes.items():
            if other_id == nid:
                continue
            if frozenset((nid, other_id)) in connected:
                continue
            d = distance(a.point, other.point)
            if d <= radius:
                candidates.append((d, nid, other_id))
    candidates.sort()

    degree1 = set(dead_before)
    repaired: set[str] = set()
    seen_pairs: set[frozenset] = set()
    helpers: list[HelperEdge] = []
    report_rows: list[tuple[str, str, float]] = []
    for d, a, b in candidates:
        pair = frozenset((a, b))
        if pair in seen_pairs or pair in connected:
            continue
        if a in repaired or (b in degree1 and b in repaired):
            continue
        seen_pairs.add(pair)
        connected.add(pair)
        repaired.add(a)
        if b in degree1:
            repaired.add(b)
        helper = HelperEdge(
            id=f"h{len(graph.helper_edges) + len(helpers):03d}",
            name="",
            geometry=(graph.nodes[a].point, graph.nodes[b].point),
            from_node=a,
            to_node=b,
        )
        if grid is not None:
            attribute_edge(helper, grid)
        helpers.append(helper)
        report_rows.append((a, b, d))

    graph.helper_edges.extend(helpers)
    dead_after = _dead_ends(graph)
    report = RepairReport(
        dead_ends_before=len(dead_before),
        dead_ends_after=len(dead_after),
        helper_edges_inserted=len(helpers),
        helpers=report_rows,
    )
    graph.repair_report = report
    return graph, report


def _dead_ends(graph: ResortGraph) -> list[str]:
    return sorted(nid for nid in graph.nodes if graph.degree(nid) == 1)


def attribute_graph(graph: ResortGraph, grid: ElevationGrid, step: float = 30.0) -> None:
    """Compute subsegment attributes for every edge and fill node elevations.

    Slopes without a declared difficulty get one from their steepest
    descending subsegment.
    """
    for e in graph.all_edges():
        if not e.subsegments:
            attribute_edge(e, grid, step=step)
    for nid, node in list(graph.nodes.items()):
        try:
            ele = sample_elevation(grid, node.point)
        except SkigraphError:
            continue
        graph.nodes[nid] = Node(id=nid, point=GeoPoint(node.point.lon, node.point.lat, ele))
    for e in graph.slopes():
        if e.declared_difficulty is None:
            e.declared_difficulty = classify_difficulty(max_downhill_steepness(e.subsegments))


@dataclass
class QualityReport:
    length_by_difficulty: dict[str, float]
    total_slope_length: float
    dead_ends: list[str]
    components: list[list[str]]
    missing_attributes: list[str]

    def to_dict(self) -> dict:
        return {
            "length_by_difficulty_m": {k: round(v, 1) for k, v in self.length_by_difficulty.items()},
            "total_slope_length_m": round(self.total_slope_length, 1),
            "dead_ends": self.dead_ends,
            "components": self.components,
            "missing_attributes": self.missing_attributes,
        }


def validate(graph: ResortGraph) -> QualityReport:
    """Data-quality summary: length per declared class, dead ends,
    weakly connected components, and edges with incomplete attributes.

    Helper connectors never count toward the difficulty totals.
    """
    for e in graph.all_edges():
        for nid in (e.from_node, e.to_node):
            if nid not in graph.nodes:
                raise SkigraphError(f"edge {e.id} references unknown node {nid}")

    lengths: dict[str, float] = {}
    for s in graph.slopes():
        key = s.declared_difficulty.value if s.declared_difficulty else "unclassified"
        lengths[key] = lengths.get(key, 0.0) + s.length

    neighbors: dict[str, set[str]] = {nid: set() for nid in graph.nodes}
    for e in graph.all_edges():
        neighbors[e.from_node].add(e.to_node)
        neighbors[e.to_node].add(e.from_node)
    seen: set[str] = set()
    components = []
    for nid in sorted(graph.nodes):
        if nid in seen:
            continue
        stack, comp = [nid], []
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            comp.append(cur)
            stack.extend(neighbors[cur] - seen)
        components.append(sorted(comp))

    missing = sorted(
        e.id for e in graph.all_edges() if getattr(e, "attributes_missing", False) or not e.subsegments
    )
    return QualityReport(
        length_by_difficulty=dict(sorted(lengths.items())),
        total_slope_length=sum(lengths.values()),
        dead_ends=_dead_ends(graph),
        components=components,
        missing_attributes=missing,
    )


def build_resort(
    features: Sequence[RawFeature],
    grid: ElevationGrid,
    *,
    name: str = "",
    snap_tolerance: float = SNAP_TOLERANCE_M,
    repair_radius: float = REPAIR_RADIUS_M,
    step: float = 30.0,
) -> tuple[ResortGraph, list[Rejection]]:
    """Full build pipeline: ingest, snap topology, repair, attribute."""
    edges, rejects = ingest(features, grid)
    graph = build_topology(edges, snap_tolerance=snap_tolerance, name=name)
    repair_connectivity(graph, radius=repair_radius, grid=grid)
    attribute_graph(graph, grid, step=step)
    return graph, rejects
