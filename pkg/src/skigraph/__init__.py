"""Preference-based exploration and route planning for ski resorts.

Builds an attributed, routable graph of slopes and lifts from geodata,
an elevation grid, and recorded GPS activities, then ranks slopes and
plans routes around user-weighted preferences.
"""

__version__ = "0.1.0"

from .build import build_resort, build_topology, ingest, repair_connectivity, validate
from .bundle import load_bundle, save_bundle
from .dem import ElevationGrid, read_esri_ascii, sample_elevation
from .geo import GeoPoint
from .model import (
    Difficulty,
    HelperEdge,
    LiftEdge,
    LiftType,
    Node,
    ResortGraph,
    SlopeEdge,
    SubSegment,
)
from .prefs import Preference, PreferenceSet, load_preset, score_and_rank
from .routing import (
    build_costed_graph,
    plan_automated,
    plan_semi_automated,
    sequence_favorites,
    shortest_route,
    summarize,
)
from .segments import classify_difficulty, discrepancy, segmentize
from .tracks import ActivityTrack, PipelineConfig, run_pipeline

__all__ = [
    "ActivityTrack",
    "Difficulty",
    "ElevationGrid",
    "GeoPoint",
    "HelperEdge",
    "LiftEdge",
    "LiftType",
    "Node",
    "Preference",
    "PreferenceSet",
    "PipelineConfig",
    "ResortGraph",
    "SlopeEdge",
    "SubSegment",
    "build_costed_graph",
    "build_resort",
    "build_topology",
    "classify_difficulty",
    "discrepancy",
    "ingest",
    "load_bundle",
    "load_preset",
    "plan_automated",
    "plan_semi_automated",
    "read_esri_ascii",
    "repair_connectivity",
    "run_pipeline",
    "sample_elevation",
    "save_bundle",
    "score_and_rank",
    "segmentize",
    "sequence_favorites",
    "shortest_route",
    "summarize",
    "validate",
]
