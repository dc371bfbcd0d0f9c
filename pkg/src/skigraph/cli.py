"""Command line front end for the offline pipeline and engine queries.

Exit codes: 0 ok, 1 usage error, 2 domain error, 3 I/O error. Every
command takes ``--format json`` for machine-readable output.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .build import build_resort, load_features, validate
from .bundle import load_bundle, save_bundle
from .dem import read_esri_ascii
from .errors import SkigraphError
from .heatmap import kde_raster, write_png
from .prefs import PreferenceSet
from .routing import build_costed_graph, plan_automated, plan_semi_automated, shortest_route, summarize
from .tracks import load_tracks, run_pipeline


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def cli(ctx, fmt):
    ctx.obj = {"fmt": fmt}


def _emit(ctx, payload: dict, text: str) -> None:
    if ctx.obj["fmt"] == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(text)


@cli.command()
@click.option("--geojson", "features_path", required=True, type=click.Path(exists=True))
@click.option("--dem", "dem_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--name", default="")
@click.option("--snap-tolerance", default=1.0, show_default=True)
@click.option("--repair-radius", default=30.0, show_default=True)
@click.pass_context
def build(ctx, features_path, dem_path, out_path, name, snap_tolerance, repair_radius):
    """Ingest geodata, build and repair the graph, attribute it, write a bundle."""
    grid = read_esri_ascii(dem_path)
    features = load_features(features_path)
    graph, rejects = build_resort(
        features,
        grid,
        name=name,
        snap_tolerance=snap_tolerance,
        repair_radius=repair_radius,
    )
    save_bundle(graph, out_path)
    rep = graph.repair_report
    payload = {
        "bundle": out_path,
        "edges": len(graph.edges),
        "helpers": len(graph.helper_edges),
        "nodes": len(graph.nodes),
        "rejected": [{"feature": r.feature, "reason": r.reason} for r in rejects],
        "repair": rep.to_dict() if rep else None,
    }
    lines = [
        f"built {out_path}: {len(graph.edges)} edges, {len(graph.nodes)} nodes",
        f"dead ends {rep.dead_ends_before} -> {rep.dead_ends_after}, helpers {rep.helper_edges_inserted}",
    ]
    if rejects:
        lines.append(f"rejected {len(rejects)} features: " + "; ".join(f"{r.feature} ({r.reason})" for r in rejects))
    _emit(ctx, payload, "\n".join(lines))


@cli.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.option("--tracks", "tracks_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def trajectories(ctx, bundle_path, tracks_dir, out_path):
    """Filter, match, and fold recorded activities into the bundle."""
    graph = load_bundle(bundle_path)
    tracks = load_tracks(tracks_dir)
    stats = run_pipeline(graph, tracks)
    save_bundle(graph, out_path)
    payload = {"bundle": out_path, "stats": stats.to_dict()}
    rejected = sum(stats.rejected.values())
    lines = [
        f"activities: {stats.accepted} accepted, {rejected} rejected "
        + (f"({', '.join(f'{k}={v}' for k, v in sorted(stats.rejected.items()))})" if rejected else ""),
        f"rides: {stats.matched_rides}/{stats.rides} matched, "
        f"{stats.sub_trajectories} sub-trajectories",
        "per-edge samples: "
        + (", ".join(f"{k}={v}" for k, v in sorted(stats.edge_counts.items())) or "none"),
        f"wrote {out_path}",
    ]
    _emit(ctx, payload, "\n".join(lines))


@cli.command("validate")
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.pass_context
def validate_cmd(ctx, bundle_path):
    """Data-quality report: lengths per class, dead ends, components."""
    graph = load_bundle(bundle_path)
    report = validate(graph)
    payload = report.to_dict()
    lines = ["total slope length by difficulty:"]
    for diff, meters in report.length_by_difficulty.items():
        lines.append(f"  {diff:<14} {meters / 1000.0:7.2f} km")
    lines.append(f"  {'total':<14} {report.total_slope_length / 1000.0:7.2f} km")
    lines.append(f"dead ends: {len(report.dead_ends)} ({', '.join(report.dead_ends) or 'none'})")
    lines.append(f"components: {len(report.components)}")
    if report.missing_attributes:
        lines.append(f"edges missing attributes: {', '.join(report.missing_attributes)}")
    _emit(ctx, payload, "\n".join(lines))


@cli.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.option("--prefs", "prefs_path", required=True, type=click.Path(exists=True))
@click.option("--limit", default=None, type=int)
@click.pass_context
def rank(ctx, bundle_path, prefs_path, limit):
    """Best matching slopes for a preference file."""
    from .prefs import score_and_rank

    graph = load_bundle(bundle_path)
    prefs = PreferenceSet.load(prefs_path)
    scores = score_and_rank(graph, prefs, limit=limit)
    names = {e.id: e.name for e in graph.all_edges()}
    payload = {"scores": [s.to_dict() for s in scores]}
    lines = [f"{'rank':<5}{'edge':<8}{'s_pref':<9}name"]
    for i, s in enumerate(scores, start=1):
        lines.append(f"{i:<5}{s.edge_id:<8}{s.s_pref:<9.4f}{names.get(s.edge_id, '')}")
    _emit(ctx, payload, "\n".join(lines))


@cli.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.option("--prefs", "prefs_path", required=True, type=click.Path(exists=True))
@click.option("--from", "from_node", required=True)
@click.option("--to", "to_node", required=True)
@click.option("--duration", default=None, type=float, help="Target seconds (automated mode)")
@click.option("--favorites", default=None, help="Comma-separated edge ids (semi-automated mode)")
@click.pass_context
def route(ctx, bundle_path, prefs_path, from_node, to_node, duration, favorites):
    """Plan a route; give either --duration or --favorites."""
    graph = load_bundle(bundle_path)
    prefs = PreferenceSet.load(prefs_path)
    cg = build_costed_graph(graph, prefs)
    if duration is not None:
        plan = plan_automated(cg, from_node, to_node, duration, prefs)
    elif favorites is not None:
        plan = plan_semi_automated(cg, from_node, to_node, [f for f in favorites.split(",") if f])
    else:
        rt = shortest_route(cg, from_node, to_node)
        plan_dict = {"route": rt.to_dict(), "summary": summarize(rt, graph).to_dict()}
        _emit(ctx, plan_dict, _route_text(plan_dict))
        return
    _emit(ctx, plan.to_dict(), _route_text(plan.to_dict()))


def _route_text(plan: dict) -> str:
    summary = plan["summary"]
    lines = [
        "route: " + (" -> ".join(plan["route"]["edges"]) or "(empty)"),
        f"descent {summary['vertical_descent']:.0f} m, length {summary['total_length']:.0f} m, "
        f"time {summary['estimated_time'] / 60.0:.1f} min",
    ]
    if plan.get("chosen_favorites"):
        lines.append("favorites: " + ", ".join(plan["chosen_favorites"]))
    if plan.get("freeride_disclaimer"):
        lines.append("warning: route contains freeride terrain, check avalanche conditions")
    return "\n".join(lines)


@cli.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.option("--tracks", "tracks_dir", required=True, type=click.Path(exists=True))
@click.option("--bbox", default=None, help="west,south,east,north (defaults to the resort bbox)")
@click.option("--cell", default=5.0, show_default=True)
@click.option("--bandwidth", default=15.0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def heatmap(ctx, bundle_path, tracks_dir, bbox, cell, bandwidth, out_path):
    """Render a traffic density PNG from raw trajectory points."""
    graph = load_bundle(bundle_path)
    tracks = load_tracks(tracks_dir)
    points = [p.point for t in tracks for p in t.points]
    box = tuple(float(v) for v in bbox.split(",")) if bbox else graph.bbox()
    raster = kde_raster(points, box, bandwidth=bandwidth, cell=cell)
    write_png(raster, out_path)
    payload = {"out": out_path, "points": raster.n_points, "shape": list(raster.shape)}
    _emit(ctx, payload, f"wrote {out_path} ({raster.shape[0]}x{raster.shape[1]} cells, "
                        f"{raster.n_points} points)")


@cli.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--tracks", "tracks_dir", default=None, type=click.Path(exists=True))
@click.option("--cors-origin", default="*", show_default=True)
def serve(bundle_path, addr, tracks_dir, cors_origin):
    """Serve the HTTP API for a bundle."""
    import uvicorn

    from .server import create_app

    graph = load_bundle(bundle_path)
    points = []
    if tracks_dir:
        points = [p.point for t in load_tracks(tracks_dir) for p in t.points]
    app = create_app(graph, track_points=points, cors_origin=cors_origin)
    host, _, port = addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 1
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except SkigraphError as exc:
        click.echo(f"error: {type(exc).__name__.removesuffix('Error')}: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
