"""Versioned resort bundle: one JSON file holding the whole preprocessed graph.

Serialization is canonical (sorted keys, fixed separators), so saving
the same graph twice produces byte-identical files and the embedded
checksum stays meaningful.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import BundleParseError, ChecksumMismatchError, VersionMismatchError
from .geo import GeoPoint
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
    SubSegment,
    TravelTimeSource,
)

FORMAT_VERSION = 1


def _point(p: GeoPoint) -> list:
    out = [p.lon, p.lat]
    if p.ele is not None:
        out.append(p.ele)
    return out


def _read_point(raw: list) -> GeoPoint:
    return GeoPoint(raw[0], raw[1], raw[2] if len(raw) > 2 else None)


def _segment(s: SubSegment) -> dict:
    return {
        "index": s.index,
        "start": _point(s.start),
        "end": _point(s.end),
        "length": s.length,
        "altitude": s.altitude,
        "steepness": s.steepness,
        "compass": s.compass,
    }


def _read_segment(raw: dict) -> SubSegment:
    return SubSegment(
        index=raw["index"],
        start=_read_point(raw["start"]),
        end=_read_point(raw["end"]),
        length=raw["length"],
        altitude=raw.get("altitude"),
        steepness=raw.get("steepness"),
        compass=raw.get("compass"),
    )


def _edge(e: Edge) -> dict:
    base = {
        "id": e.id,
        "kind": e.kind,
        "name": e.name,
        "geometry": [_point(p) for p in e.geometry],
        "from_node": e.from_node,
        "to_node": e.to_node,
        "subsegments": [_segment(s) for s in e.subsegments],
        "median_travel_time": e.median_travel_time,
        "travel_time_source": e.travel_time_source.value if e.travel_time_source else None,
    }
    if isinstance(e, SlopeEdge):
        base.update(
            declared_difficulty=e.declared_difficulty.value if e.declared_difficulty else None,
            groomed=e.groomed,
            ref_label=e.ref_label,
            popularity=e.popularity,
            attributes_missing=e.attributes_missing,
        )
    elif isinstance(e, LiftEdge):
        base.update(
            lift_type=e.lift_type.value,
            bidirectional=e.bidirectional,
            amenities={
                "heated_seats": e.amenities.heated_seats,
                "bubble": e.amenities.bubble,
                "occupancy": e.amenities.occupancy,
            },
        )
    elif isinstance(e, HelperEdge):
        base["attributes_missing"] = e.attributes_missing
    return base


def _read_edge(raw: dict) -> Edge:
    common = dict(
        id=raw["id"],
        name=raw.get("name", ""),
        geometry=tuple(_read_point(p) for p in raw["geometry"]),
        from_node=raw.get("from_node"),
        to_node=raw.get("to_node"),
        subsegments=tuple(_read_segment(s) for s in raw.get("subsegments", [])),
        median_travel_time=raw.get("median_travel_time"),
        travel_time_source=(
            TravelTimeSource(raw["travel_time_source"]) if raw.get("travel_time_source") else None
        ),
    )
    kind = raw.get("kind")
    if kind == "slope":
        return SlopeEdge(
            declared_difficulty=(
                Difficulty(raw["declared_difficulty"]) if raw.get("declared_difficulty") else None
            ),
            groomed=raw.get("groomed", True),
            ref_label=raw.get("ref_label", ""),
            popularity=raw.get("popularity"),
            attributes_missing=raw.get("attributes_missing", False),
            **common,
        )
    if kind == "lift":
        am = raw.get("amenities", {})
        return LiftEdge(
            lift_type=LiftType(raw.get("lift_type", "chair")),
            bidirectional=raw.get("bidirectional", False),
            amenities=LiftAmenities(
                heated_seats=am.get("heated_seats", False),
                bubble=am.get("bubble", False),
                occupancy=am.get("occupancy"),
            ),
            **common,
        )
    if kind == "helper":
        return HelperEdge(attributes_missing=raw.get("attributes_missing", False), **common)
    raise BundleParseError(f"unknown edge kind: {kind}", f"edge {raw.get('id')}")


def graph_payload(graph: ResortGraph) -> dict:
    payload = {
        "format_version": FORMAT_VERSION,
        "resort": {"name": graph.name, "bbox": list(graph.bbox())},
        "nodes": [
            {"id": n.id, "point": _point(n.point)} for _, n in sorted(graph.nodes.items())
        ],
        "edges": [_edge(e) for e in graph.edges],
        "helper_edges": [_edge(e) for e in graph.helper_edges],
        "repair_report": graph.repair_report.to_dict() if graph.repair_report else None,
    }
    return payload


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def save_bundle(graph: ResortGraph, path: str | Path) -> None:
    payload = graph_payload(graph)
    checksum = hashlib.sha256(_canonical(payload).encode()).hexdigest()
    payload["checksum"] = checksum
    Path(path).write_text(_canonical(payload) + "\n")


def load_bundle(path: str | Path) -> ResortGraph:
    """Load a bundle, verifying version and content checksum."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BundleParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(raw, dict):
        raise BundleParseError("bundle must be a JSON object", str(path))

    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"bundle version {version}, expected {FORMAT_VERSION}")
    claimed = raw.pop("checksum", None)
    actual = hashlib.sha256(_canonical(raw).encode()).hexdigest()
    if claimed != actual:
        raise ChecksumMismatchError("bundle content does not match its checksum")

    try:
        graph = ResortGraph(name=raw["resort"].get("name", ""))
        for n in raw["nodes"]:
            graph.nodes[n["id"]] = Node(id=n["id"], point=_read_point(n["point"]))
        graph.edges = [_read_edge(e) for e in raw["edges"]]
        graph.helper_edges = [_read_edge(e) for e in raw.get("helper_edges", [])]
        rep = raw.get("repair_report")
        if rep:
            graph.repair_report = RepairReport(
                dead_ends_before=rep["dead_ends_before"],
                dead_ends_after=rep["dead_ends_after"],
                helper_edges_inserted=rep["helper_edges_inserted"],
                helpers=[
                    (h["from_node"], h["to_node"], h["length_m"]) for h in rep.get("helpers", [])
                ],
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleParseError(f"malformed bundle: {exc}", str(path)) from exc
    return graph
