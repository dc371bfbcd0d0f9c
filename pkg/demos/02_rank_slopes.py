"""Rank slopes against weighted preferences.

Shows the shipped presets plus a custom preference set, and how the
score reacts when a single weight changes.
"""

from pathlib import Path

from skigraph import PreferenceSet, build_resort, load_preset, read_esri_ascii, score_and_rank
from skigraph.build import load_features

DATA = Path(__file__).resolve().parent.parent / "data" / "fixture_resort"

grid = read_esri_ascii(DATA / "dem.asc")
graph, _ = build_resort(load_features(DATA / "pistes.geojson"), grid, name="Fixture Peak")
names = {e.id: e.name for e in graph.all_edges()}


def show(title, prefs):
    print(f"\n{title}")
    for i, score in enumerate(score_and_rank(graph, prefs), start=1):
        print(f"  {i}. {score.edge_id:<6} {names[score.edge_id]:<14} s_pref={score.s_pref:.4f}")


for preset in ("easy", "intermediate", "advanced"):
    prefs = load_preset(preset)
    # the fixture bundle has no trajectory data; keep crowdedness out
    prefs = PreferenceSet(tuple(p for p in prefs.preferences if p.attribute != "crowdedness"))
    show(f"preset '{preset}'", prefs)

custom = PreferenceSet.from_json([
    {"attribute": "steepness", "weight": 1.0, "target": 36, "sigma": 10},
    {"attribute": "compass", "weight": 0.8, "target": ["S", "SE"]},
    {"attribute": "grooming", "weight": 0.5, "target": ["groomed"]},
])
show("custom: steep southern groomed runs", custom)

nudged = PreferenceSet.from_json([
    {"attribute": "steepness", "weight": 1.0, "target": 36, "sigma": 10},
    {"attribute": "compass", "weight": 0.8, "target": ["S", "SE"]},
    {"attribute": "grooming", "weight": 0.0, "target": ["groomed"]},  # weight off
])
show("same but grooming ignored", nudged)
