"""HTTP service exposing resort data, ranking, and route planning.

The loaded graph is an immutable snapshot shared by all handlers, so
every endpoint is stateless: identical requests produce identical
responses. Preferences always travel with the request.
"""

from __future__ import annotations

from typing import Any, Sequence

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import __version__
from .errors import (
    EmptyPlanError,
    EmptyRegionError,
    InfeasibleDurationError,
    PreferenceError,
    SkigraphError,
    UnknownEdgeError,
    UnknownNodeError,
    UnreachableError,
    UnreachableFavoriteError,
)
from .geo import COMPASS_BINS, GeoPoint
from .heatmap import kde_raster, png_bytes
from .model import Edge, LiftEdge, ResortGraph, SlopeEdge
from .prefs import PreferenceSet, score_and_rank
from .routing import build_costed_graph, plan_automated, plan_semi_automated

_ROUTING_ERRORS = (
    UnreachableError,
    UnreachableFavoriteError,
    InfeasibleDurationError,
    EmptyPlanError,
)


def edge_feature(edge: Edge) -> dict:
    """GeoJSON feature with the rendering attributes the map needs."""
    props: dict[str, Any] = {
        "id": edge.id,
        "kind": edge.kind,
        "name": edge.name,
        "length_m": edge.length,
        "steepness": [s.steepness for s in edge.subsegments],
        "median_travel_time": edge.median_travel_time,
    }
    if isinstance(edge, SlopeEdge):
        props.update(
            difficulty=edge.declared_difficulty.value if edge.declared_difficulty else None,
            groomed=edge.groomed,
            ref=edge.ref_label,
            popularity=edge.popularity,
        )
    elif isinstance(edge, LiftEdge):
        props.update(lift_type=edge.lift_type.value, bidirectional=edge.bidirectional)
    return {
        "type": "Feature",
        "geometry": {
            "type": "LineString",
            "coordinates": [[p.lon, p.lat] for p in edge.geometry],
        },
        "properties": props,
    }


def resort_geojson(graph: ResortGraph) -> dict:
    return {
        "type": "FeatureCollection",
        "name": graph.name,
        "features": [edge_feature(e) for e in graph.all_edges()],
        "nodes": [
            {"id": n.id, "lon": n.point.lon, "lat": n.point.lat, "ele": n.point.ele}
            for _, n in sorted(graph.nodes.items())
        ],
    }


def tooltip_payload(edge: Edge) -> dict:
    """Everything the inspection panel shows for one edge."""
    drops = [
        (s.steepness / 100.0 * s.length) if s.steepness is not None else 0.0
        for s in edge.subsegments
    ]
    steeps = [s.steepness for s in edge.subsegments if s.steepness is not None]
    lengths = [s.length for s in edge.subsegments if s.steepness is not None]
    weighted_mean = (
        sum(st * ln for st, ln in zip(steeps, lengths)) / sum(lengths) if lengths else None
    )
    counts = {b: 0 for b in COMPASS_BINS}
    known = 0
    for s in edge.subsegments:
        if s.compass is not None:
            counts[s.compass] += 1
            known += 1
    histogram = {b: (counts[b] / known if known else 0.0) for b in COMPASS_BINS}

    cum = 0.0
    profile = []
    for s in edge.subsegments:
        cum += s.length
        profile.append({"distance_m": cum, "altitude_m": s.altitude, "steepness_pct": s.steepness})

    payload: dict[str, Any] = {
        "id": edge.id,
        "kind": edge.kind,
        "name": edge.name,
        "length_m": edge.length,
        "descent_m": sum(d for d in drops if d > 0),
        "ascent_m": -sum(d for d in drops if d < 0),
        "mean_steepness": weighted_mean,
        "max_steepness": max(steeps, default=None),
        "median_travel_time": edge.median_travel_time,
        "travel_time_source": edge.travel_time_source.value if edge.travel_time_source else None,
        "compass_histogram": histogram,
        "altitude_profile": profile,
    }
    if isinstance(edge, SlopeEdge):
        payload.update(
            difficulty=edge.declared_difficulty.value if edge.declared_difficulty else None,
            groomed=edge.groomed,
            ref=edge.ref_label,
            popularity=edge.popularity,
        )
    elif isinstance(edge, LiftEdge):
        payload.update(
            lift_type=edge.lift_type.value,
            bidirectional=edge.bidirectional,
            amenities={
                "heated_seats": edge.amenities.heated_seats,
                "bubble": edge.amenities.bubble,
                "occupancy": edge.amenities.occupancy,
            },
        )
    return payload


def _bad_request(errors: Sequence[dict]) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": "bad_request", "fields": list(errors)})


def create_app(
    graph: ResortGraph | None = None,
    track_points: Sequence[GeoPoint] | None = None,
    cors_origin: str = "*",
) -> FastAPI:
    """Build the service around an already loaded graph snapshot."""
    app = FastAPI(title="skigraph", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.graph = graph
    app.state.track_points = list(track_points) if track_points else []

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        fields = [
            {"field": ".".join(str(p) for p in err.get("loc", [])), "message": err.get("msg", "")}
            for err in exc.errors()
        ]
        return _bad_request(fields)

    def current_graph() -> ResortGraph:
        g = app.state.graph
        if g is None:
            raise _NoBundle()
        return g

    class _NoBundle(Exception):
        pass

    @app.exception_handler(_NoBundle)
    async def no_bundle_handler(request: Request, exc: _NoBundle):
        return JSONResponse(status_code=503, content={"error": "bundle_not_loaded"})

    @app.get("/api/health")
    def health():
        g = app.state.graph
        return {
            "status": "ok",
            "version": __version__,
            "bundle_loaded": g is not None,
            "resort": g.name if g else None,
            "nodes": len(g.nodes) if g else 0,
            "edges": len(list(g.all_edges())) if g else 0,
        }

    @app.get("/api/resort")
    def resort():
        return resort_geojson(current_graph())

    @app.get("/api/slopes/{edge_id}")
    def slope(edge_id: str):
        g = current_graph()
        try:
            edge = g.edge(edge_id)
        except KeyError:
            return JSONResponse(status_code=404, content={"error": "unknown_edge", "id": edge_id})
        return tooltip_payload(edge)

    async def read_body(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            raise PreferenceError("request body must be a JSON object", field="body")
        if not isinstance(body, dict):
            raise PreferenceError("request body must be a JSON object", field="body")
        return body

    def parse_prefs(body: dict) -> PreferenceSet:
        raw = body.get("preferences")
        if not isinstance(raw, list):
            raise PreferenceError("preferences must be a list", field="preferences")
        prefs = PreferenceSet.from_json(raw)
        if prefs.P < 1:
            raise PreferenceError(
                "at least one preference with weight > 0 is required", field="preferences"
            )
        return prefs

    @app.post("/api/rank")
    async def rank(request: Request):
        g = current_graph()
        try:
            body = await read_body(request)
            prefs = parse_prefs(body)
            limit = body.get("limit")
            if limit is not None:
                limit = int(limit)
        except PreferenceError as exc:
            return _bad_request([{"field": exc.field or "preferences", "message": str(exc)}])
        except (TypeError, ValueError):
            return _bad_request([{"field": "limit", "message": "must be an integer"}])
        scores = score_and_rank(g, prefs, limit=limit)
        return {"scores": [s.to_dict() for s in scores]}

    @app.post("/api/route")
    async def route(request: Request):
        g = current_graph()
        try:
            body = await read_body(request)
        except PreferenceError as exc:
            return _bad_request([{"field": exc.field or "body", "message": str(exc)}])
        mode = body.get("mode")
        if mode not in ("auto", "semi"):
            return _bad_request([{"field": "mode", "message": "must be 'auto' or 'semi'"}])
        try:
            prefs = parse_prefs(body)
        except PreferenceError as exc:
            return _bad_request([{"field": exc.field or "preferences", "message": str(exc)}])
        start = body.get("start_node")
        end = body.get("end_node")
        for field_name, value in (("start_node", start), ("end_node", end)):
            if not isinstance(value, str):
                return _bad_request([{"field": field_name, "message": "node id required"}])
            if value not in g.nodes:
                return JSONResponse(
                    status_code=404, content={"error": "unknown_node", "id": value}
                )

        cg = build_costed_graph(g, prefs)
        try:
            if mode == "auto":
                duration = body.get("duration")
                if not isinstance(duration, (int, float)) or duration <= 0:
                    return _bad_request(
                        [{"field": "duration", "message": "positive seconds required"}]
                    )
                plan = plan_automated(cg, start, end, float(duration), prefs)
            else:
                favorites = body.get("favorites") or []
                if not isinstance(favorites, list):
                    return _bad_request([{"field": "favorites", "message": "must be a list"}])
                known = {e.id for e in g.all_edges()}
                missing = [f for f in favorites if f not in known]
                if missing:
                    return JSONResponse(
                        status_code=404, content={"error": "unknown_edge", "id": missing[0]}
                    )
                plan = plan_semi_automated(cg, start, end, [str(f) for f in favorites])
        except _ROUTING_ERRORS as exc:
            return JSONResponse(
                status_code=422,
                content={"error": type(exc).__name__.removesuffix("Error"), "detail": str(exc)},
            )
        except UnknownEdgeError as exc:
            return JSONResponse(status_code=404, content={"error": "unknown_edge", "id": str(exc)})
        return plan.to_dict()

    @app.get("/api/heatmap")
    def heatmap(bbox: str, cell: float = 5.0):
        current_graph()
        points = app.state.track_points
        if not points:
            return JSONResponse(status_code=404, content={"error": "no_trajectory_data"})
        try:
            west, south, east, north = (float(v) for v in bbox.split(","))
        except ValueError:
            return _bad_request([{"field": "bbox", "message": "expected west,south,east,north"}])
        try:
            raster = kde_raster(points, (west, south, east, north), cell=cell)
        except EmptyRegionError as exc:
            return JSONResponse(status_code=422, content={"error": "EmptyRegion", "detail": str(exc)})
        return Response(content=png_bytes(raster), media_type="image/png")

    @app.exception_handler(SkigraphError)
    async def domain_handler(request: Request, exc: SkigraphError):
        status = 404 if isinstance(exc, (UnknownNodeError, UnknownEdgeError)) else 422
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__.removesuffix("Error"), "detail": str(exc)},
        )

    return app
