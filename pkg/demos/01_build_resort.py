"""Build a routable resort graph from geodata and an elevation grid.

The fixture resort is tiny (one lift, five slopes, three of them dead-end
stubs), which makes the connectivity repair easy to watch: two gaps are
small enough to bridge with walkable helper connectors, one stays a dead
end.
"""

from pathlib import Path

from skigraph import build_resort, read_esri_ascii, validate
from skigraph.build import load_features

DATA = Path(__file__).resolve().parent.parent / "data" / "fixture_resort"

grid = read_esri_ascii(DATA / "dem.asc")
features = load_features(DATA / "pistes.geojson")
graph, rejects = build_resort(features, grid, name="Fixture Peak")

print(f"built '{graph.name}': {len(graph.nodes)} nodes, {len(graph.edges)} edges")
for r in rejects:
    print(f"  rejected {r.feature}: {r.reason}")

report = graph.repair_report
print(f"\nconnectivity repair: dead ends {report.dead_ends_before} -> {report.dead_ends_after}")
for a, b, length in report.helpers:
    print(f"  helper {a} <-> {b} ({length:.0f} m)")

quality = validate(graph)
print("\ntotal slope length by difficulty:")
for difficulty, meters in quality.length_by_difficulty.items():
    print(f"  {difficulty:<14}{meters / 1000:6.2f} km")
print(f"  {'total':<14}{quality.total_slope_length / 1000:6.2f} km")
print(f"remaining dead ends: {', '.join(quality.dead_ends) or 'none'}")

print("\nper-edge attributes (first three subsegments):")
for edge in graph.all_edges():
    steeps = [f"{s.steepness:+.0f}%" for s in edge.subsegments[:3]]
    label = getattr(edge, "declared_difficulty", None)
    print(f"  {edge.id:<5} {edge.kind:<7} {edge.name:<14} "
          f"{label.value if label else '-':<13} {' '.join(steeps)}")
