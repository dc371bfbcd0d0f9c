"""Derive popularity and travel times from recorded activities, then
render a traffic heatmap.

Real deployments read GPX or CSV recordings; here a tiny generator walks
the fixture slopes at skiing speed so the whole loop runs offline.
"""

from pathlib import Path

import numpy as np

from skigraph import PipelineConfig, build_resort, read_esri_ascii
from skigraph.build import load_features
from skigraph.dem import sample_elevation
from skigraph.geo import GeoPoint, cumulative_lengths, point_at
from skigraph.heatmap import kde_raster, write_png
from skigraph.tracks import ActivityTrack, TrackPoint, run_pipeline

DATA = Path(__file__).resolve().parent.parent / "data" / "fixture_resort"
OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

grid = read_esri_ascii(DATA / "dem.asc")
graph, _ = build_resort(load_features(DATA / "pistes.geojson"), grid, name="Fixture Peak")
edges = {e.id: e for e in graph.all_edges()}


def synth_activity(activity_id, chain, rng, speed=8.0):
    """Walk an edge chain at constant speed with 2 m GPS noise."""
    geometry = []
    for eid in chain:
        pts = list(edges[eid].geometry)
        geometry.extend(pts if not geometry else pts[1:])
    cum = cumulative_lengths(geometry)
    points, t, s = [], 0.0, 0.0
    while s <= cum[-1]:
        p = point_at(geometry, cum, s)
        jitter = rng.normal(0.0, 2.0, size=2) / 111_194.0
        moved = GeoPoint(p.lon + jitter[0], p.lat + jitter[1])
        ele = sample_elevation(grid, p)
        points.append(TrackPoint(moved, t, ele))
        t += 1.0
        s += speed
    return ActivityTrack(id=activity_id, points=tuple(points))


rng = np.random.RandomState(7)
day_plans = [
    ["l000", "s003", "s001"],  # classic circuit
    ["l000", "s003", "s001"],
    ["l000", "s003", "s001"],
    ["l000", "s004"],  # steep variant
    ["l000", "s004"],
    ["s003", "s001"],  # partial recording
]
tracks = [synth_activity(f"day{i}", chain, rng) for i, chain in enumerate(day_plans)]

stats = run_pipeline(graph, tracks, PipelineConfig(measured_floor=2))
print(f"activities accepted: {stats.accepted}, rejected: {stats.rejected or 'none'}")
print(f"rides matched: {stats.matched_rides}/{stats.rides}, "
      f"sub-trajectories: {stats.sub_trajectories}")

print("\nderived per edge:")
for edge in graph.all_edges():
    parts = [f"samples={stats.edge_counts.get(edge.id, 0)}"]
    if getattr(edge, "popularity", None) is not None:
        parts.append(f"popularity={edge.popularity:.2f}")
    if edge.median_travel_time is not None:
        parts.append(f"time={edge.median_travel_time:.0f}s ({edge.travel_time_source.value})")
    print(f"  {edge.id:<5} {edge.name:<14} {' '.join(parts)}")

points = [p.point for t in tracks for p in t.points]
raster = kde_raster(points, graph.bbox(), bandwidth=15.0, cell=5.0)
png = OUT / "traffic.png"
write_png(raster, png)
print(f"\nheatmap: {png} ({raster.shape[0]}x{raster.shape[1]} cells, "
      f"peak density {raster.density.max():.3f} points/cell)")
