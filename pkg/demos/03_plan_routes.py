"""Plan routes two ways: around hand-picked favorites, and automatically
against a time budget.

Route costs follow the active preferences, lifts always cost twice a
worst-case slope, and the summary reports descent, length, time, and the
class distributions behind the summary donut.
"""

from pathlib import Path

from skigraph import (
    PreferenceSet,
    build_costed_graph,
    build_resort,
    plan_automated,
    plan_semi_automated,
    read_esri_ascii,
)
from skigraph.build import load_features
from skigraph.tracks import run_pipeline

DATA = Path(__file__).resolve().parent.parent / "data" / "fixture_resort"

grid = read_esri_ascii(DATA / "dem.asc")
graph, _ = build_resort(load_features(DATA / "pistes.geojson"), grid, name="Fixture Peak")

prefs = PreferenceSet.from_json([
    {"attribute": "steepness", "weight": 1.0, "target": 36, "sigma": 10},
    {"attribute": "grooming", "weight": 0.4, "target": ["groomed"]},
])
cg = build_costed_graph(graph, prefs)

base, top = "n001", "n003"


def show(label, plan):
    s = plan.summary
    print(f"\n{label}")
    print("  route:", " -> ".join(plan.route.edge_ids) or "(empty)")
    print(f"  descent {s.vertical_descent:.0f} m | length {s.total_length:.0f} m "
          f"| time {s.estimated_time / 60:.1f} min")
    print("  difficulty ring:", {k: round(v, 3) for k, v in s.difficulty_distribution.items()})
    print("  steepness ring: ", {k: round(v, 3) for k, v in s.steepness_distribution.items()})
    if plan.freeride_disclaimer:
        print("  ! contains freeride terrain, check avalanche conditions")


semi = plan_semi_automated(cg, base, base, ["s003", "s001"])
show("semi-automated round trip via Panorama and Talabfahrt", semi)

auto = plan_automated(cg, base, base, target_duration=900.0, prefs=prefs)
show(f"automated 15-minute budget, chose {list(auto.chosen_favorites)}", auto)

profile = auto.summary.profile
print("\naltitude profile samples (cumulative m, altitude m, steepness %):")
for sample in profile[:: max(1, len(profile) // 8)]:
    print(f"  {sample.cum_length:7.1f}  {sample.altitude:7.1f}  {sample.steepness:+6.1f}  {sample.edge_id}")
