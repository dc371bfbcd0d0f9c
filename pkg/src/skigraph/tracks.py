"""GPS activity pipeline: filtering, ride segmentation, map matching, and
derivation of popularity and travel times.

Every activity is processed independently; the final aggregation is a
deterministic reduce keyed by edge id, so input order never matters.
"""

from __future__ import annotations

import csv
import math
import statistics
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import NoDataError, NoMatchError
from .geo import GeoPoint, LocalFrame, cumulative_lengths, point_segment_distance_xy
from .model import Edge, LiftEdge, ResortGraph, SlopeEdge, TravelTimeSource


@dataclass(frozen=True)
class TrackPoint:
    point: GeoPoint
    t: float  # seconds relative to the first point
    ele: float


@dataclass(frozen=True)
class ActivityTrack:
    id: str
    points: tuple[TrackPoint, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValueError("a track needs at least 2 points")
        ts = [p.t for p in self.points]
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise ValueError("timestamps must be non-decreasing")


@dataclass(frozen=True)
class RideSegment:
    """A contiguous up (lift) or down (ski) slice of a track."""

    activity_id: str
    direction: str  # "up" | "down"
    points: tuple[TrackPoint, ...]


@dataclass(frozen=True)
class MatchedSubTrajectory:
    edge_id: str
    entry: float
    exit: float
    coverage: float
    points: tuple[TrackPoint, ...]

    @property
    def duration(self) -> float:
        return self.exit - self.entry


@dataclass
class PipelineConfig:
    """Tunables for filtering, segmentation, and matching."""

    max_median_interval: float = 1.0
    min_points: int = 30
    smoothing_window: int = 5
    reversal_seconds: float = 60.0
    reversal_elevation: float = 20.0
    candidate_radius: float = 50.0
    max_mean_residual: float = 25.0
    max_unmatched_share: float = 0.5
    min_coverage: float = 0.8
    measured_floor: int = 10
    measured_fraction: float = 0.10


# ---------------------------------------------------------------- parsing

_GPX_NS = "{http://www.topografix.com/GPX/1/1}"


def parse_gpx(path: str | Path) -> list[ActivityTrack]:
    """Read GPX 1.1 track points (lat/lon/ele/time), one activity per <trk>."""
    tree = ET.parse(path)
    stem = Path(path).stem
    tracks = []
    for ti, trk in enumerate(tree.getroot().iter(f"{_GPX_NS}trk")):
        raw = []
        for pt in trk.iter(f"{_GPX_NS}trkpt"):
            ele = pt.find(f"{_GPX_NS}ele")
            time = pt.find(f"{_GPX_NS}time")
            if ele is None or time is None or time.text is None:
                continue
            stamp = datetime.fromisoformat(time.text.replace("Z", "+00:00"))
            raw.append((float(pt.get("lon")), float(pt.get("lat")), float(ele.text), stamp))
        if len(raw) < 2:
            continue
        t0 = raw[0][3]
        points = tuple(
            TrackPoint(GeoPoint(lon, lat, ele), (stamp - t0).total_seconds(), ele)
            for lon, lat, ele, stamp in raw
        )
        tracks.append(ActivityTrack(id=f"{stem}-{ti}" if ti else stem, points=points))
    return tracks


def parse_csv(path: str | Path) -> list[ActivityTrack]:
    """Read tracks from CSV rows (activity_id, seq, lon, lat, ele, t_rel_seconds)."""
    rows: dict[str, list[tuple[int, TrackPoint]]] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            tp = TrackPoint(
                GeoPoint(float(row["lon"]), float(row["lat"]), float(row["ele"])),
                float(row["t_rel_seconds"]),
                float(row["ele"]),
            )
            rows.setdefault(row["activity_id"], []).append((int(row["seq"]), tp))
    tracks = []
    for aid in sorted(rows):
        pts = tuple(tp for _, tp in sorted(rows[aid], key=lambda r: r[0]))
        if len(pts) >= 2:
            tracks.append(ActivityTrack(id=aid, points=pts))
    return tracks


def load_tracks(directory: str | Path) -> list[ActivityTrack]:
    tracks = []
    for path in sorted(Path(directory).iterdir()):
        if path.suffix.lower() == ".gpx":
            tracks.extend(parse_gpx(path))
        elif path.suffix.lower() == ".csv":
            tracks.extend(parse_csv(path))
    return tracks


# ---------------------------------------------------------------- filtering

@dataclass(frozen=True)
class FilterResult:
    accepted: bool
    reason: str | None = None


def filter_activity(track: ActivityTrack, cfg: PipelineConfig | None = None) -> FilterResult:
    """Keep only densely sampled tracks.

    Rejects recordings whose median sampling interval exceeds one second,
    very short tracks, and tracks without spatial extent.
    """
    cfg = cfg or PipelineConfig()
    if len(track.points) < cfg.min_points:
        return FilterResult(False, "too_short")
    intervals = [b.t - a.t for a, b in zip(track.points, track.points[1:])]
    if statistics.median(intervals) > cfg.max_median_interval:
        return FilterResult(False, "sparse_sampling")
    lons = {p.point.lon for p in track.points}
    lats = {p.point.lat for p in track.points}
    if len(lons) == 1 and len(lats) == 1:
        return FilterResult(False, "no_extent")
    return FilterResult(True)


# ---------------------------------------------------------------- segmentation

def _moving_median(values: Sequence[float], window: int) -> list[float]:
    half = window // 2
    out = []
    for i in range(len(values)):
        lo = max(0, i - half)
        hi = min(len(values), i + half + 1)
        out.append(statistics.median(values[lo:hi]))
    return out


def segment_by_altitude(track: ActivityTrack, cfg: PipelineConfig | None = None) -> list[RideSegment]:
    """Split a day-long track into alternating lift (up) and ski (down) rides.

    Elevation is smoothed with a centered moving median first; a trend
    reversal only splits the track when it persists for a minute or
    accumulates 20 m, which survives ordinary GPS jitter.
    """
    cfg = cfg or PipelineConfig()
    pts = track.points
    ele = _moving_median([p.ele for p in pts], cfg.smoothing_window)
    times = [p.t for p in pts]

    pivots = [0]
    direction: str | None = None
    ext_i = 0  # extremum of the current run
    for i in range(1, len(pts)):
        if direction is None:
            if ele[i] <= ele[ext_i] and ele[i] <= ele[0]:
                low_i = i
            delta_up = ele[i] - min(ele[: i + 1])
            delta_dn = max(ele[: i + 1]) - ele[i]
            if delta_up >= cfg.reversal_elevation or delta_dn >= cfg.reversal_elevation:
                if delta_dn >= delta_up:
                    direction = "down"
                    ext_i = max(range(i + 1), key=lambda j: ele[j])
                else:
                    direction = "up"
                    ext_i = min(range(i + 1), key=lambda j: ele[j])
                # a meaningful opening counter-run becomes its own segment
                if ext_i > 0 and abs(ele[ext_i] - ele[0]) >= cfg.reversal_elevation:
                    pivots.append(ext_i)
            continue
        better = ele[i] < ele[ext_i] if direction == "down" else ele[i] > ele[ext_i]
        if better:
            ext_i = i
            continue
        counter = abs(ele[i] - ele[ext_i])
        persisted = times[i] - times[ext_i] >= cfg.reversal_seconds and counter > 0
        if counter >= cfg.reversal_elevation or persisted:
            pivots.append(ext_i)
            direction = "up" if direction == "down" else "down"
            ext_i = i
    pivots.append(len(pts) - 1)

    segments: list[RideSegment] = []
    for a, b in zip(pivots, pivots[1:]):
        if b <= a:
            continue
        net = ele[b] - ele[a]
        seg_dir = "up" if net > 0 else "down"
        slice_pts = pts[a : b + 1]
        if segments and segments[-1].direction == seg_dir:
            merged = segments[-1].points + slice_pts[1:]
            segments[-1] = RideSegment(track.id, seg_dir, merged)
        else:
            segments.append(RideSegment(track.id, seg_dir, tuple(slice_pts)))
    return segments


# ---------------------------------------------------------------- map matching

@dataclass(frozen=True)
class MatchResult:
    edge_ids: tuple[str, ...]
    assignment: tuple[str | None, ...]  # per track point
    mean_residual: float


class _EdgeIndex:
    """Planar polylines per candidate edge for fast point-to-edge distance."""

    def __init__(self, graph: ResortGraph, frame: LocalFrame, kinds: set[str]):
        self.edges: dict[str, list[tuple[float, float]]] = {}
        self.meta: dict[str, Edge] = {}
        self.arc_pos: dict[str, list[float]] = {}
        for e in graph.all_edges():
            if e.kind not in kinds:
                continue
            xy = [frame.to_xy(p) for p in e.geometry]
            self.edges[e.id] = xy
            self.meta[e.id] = e
            self.arc_pos[e.id] = cumulative_lengths(e.geometry)

    def distance(self, xy: tuple[float, float], edge_id: str) -> tuple[float, float]:
        """(distance m, arc position m) of the closest point on the edge."""
        pts = self.edges[edge_id]
        cum = self.arc_pos[edge_id]
        best_d, best_s = float("inf"), 0.0
        for i in range(len(pts) - 1):
            d, t = point_segment_distance_xy(xy, pts[i], pts[i + 1])
            if d < best_d:
                best_d = d
                best_s = cum[i] + t * (cum[i + 1] - cum[i])
        return best_d, best_s


def map_match(ride: RideSegment, graph: ResortGraph, cfg: PipelineConfig | None = None) -> MatchResult:
    """Assign a ride to a connected sequence of network edges.

    Down rides only consider slopes, up rides only lifts. Each point is
    scored against candidate edges within the search radius and the
    cheapest graph-connected assignment wins (dynamic programming over
    per-point candidates). Rides that stay far from the network are
    rejected rather than force-matched.
    """
    cfg = cfg or PipelineConfig()
    kinds = {"down": {"slope"}, "up": {"lift"}}[ride.direction]
    frame = LocalFrame(ride.points[0].point)
    index = _EdgeIndex(graph, frame, kinds)
    if not index.edges:
        raise NoMatchError(f"network has no {'/'.join(sorted(kinds))} edges")

    pts_xy = [frame.to_xy(p.point) for p in ride.points]
    candidates: list[dict[str, float]] = []
    unmatched = 0
    for xy in pts_xy:
        cand = {}
        for eid in index.edges:
            d, _ = index.distance(xy, eid)
            if d <= cfg.candidate_radius:
                cand[eid] = d
        if not cand:
            unmatched += 1
        candidates.append(cand)
    if unmatched > cfg.max_unmatched_share * len(pts_xy):
        raise NoMatchError(
            f"{unmatched}/{len(pts_xy)} points farther than {cfg.candidate_radius:.0f} m from any edge"
        )

    edges_meta = index.meta
    inf = float("inf")

    def connected(prev: str, cur: str) -> bool:
        if prev == cur:
            return True
        return edges_meta[prev].to_node == edges_meta[cur].from_node

    # DP over points that have candidates
    dp_rows: list[tuple[int, dict[str, tuple[float, str | None]]]] = []
    for i, cand in enumerate(candidates):
        if not cand:
            continue
        if not dp_rows:
            dp_rows.append((i, {eid: (d, None) for eid, d in sorted(cand.items())}))
            continue
        _, prev_row = dp_rows[-1]
        row: dict[str, tuple[float, str | None]] = {}
        for eid, d in sorted(cand.items()):
            # seed with the same edge so cost ties keep runs contiguous
            best_cost, best_prev = (prev_row[eid][0], eid) if eid in prev_row else (inf, None)
            for pid, (pcost, _) in prev_row.items():
                if pcost < best_cost and connected(pid, eid):
                    best_cost, best_prev = pcost, pid
            if best_prev is not None:
                row[eid] = (best_cost + d, best_prev)
        if not row:
            # no connected continuation; restart the chain at this point
            row = {eid: (prev_min + d, None) for eid, d in sorted(cand.items())
                   for prev_min in [min(c for c, _ in prev_row.values())]}
        dp_rows.append((i, row))

    if not dp_rows:
        raise NoMatchError("no point close enough to the network")

    # backtrack the cheapest assignment; ties prefer a continuing run
    assignment: list[str | None] = [None] * len(ride.points)
    _, last_row = dp_rows[-1]
    cur = min(sorted(last_row), key=lambda eid: (last_row[eid][0], last_row[eid][1] != eid))
    for row_i in range(len(dp_rows) - 1, -1, -1):
        pt_i, row = dp_rows[row_i]
        assignment[pt_i] = cur
        prev = row[cur][1]
        if prev is None and row_i > 0:
            _, prev_row = dp_rows[row_i - 1]
            prev = min(sorted(prev_row), key=lambda eid: prev_row[eid][0])
        cur = prev if prev is not None else cur

    residuals = [
        candidates[i][assignment[i]]
        for i in range(len(assignment))
        if assignment[i] is not None and assignment[i] in candidates[i]
    ]
    mean_residual = sum(residuals) / len(residuals) if residuals else inf
    if mean_residual > cfg.max_mean_residual:
        raise NoMatchError(f"mean residual {mean_residual:.1f} m exceeds {cfg.max_mean_residual:.0f} m")

    sequence: list[str] = []
    for eid in assignment:
        if eid is not None and (not sequence or sequence[-1] != eid):
            sequence.append(eid)
    return MatchResult(tuple(sequence), tuple(assignment), mean_residual)


def split_at_intersections(
    ride: RideSegment, match: MatchResult, graph: ResortGraph
) -> list[MatchedSubTrajectory]:
    """Cut a matched ride into one sub-trajectory per traversed edge.

    Entry and exit timestamps come from the assigned points closest to
    the edge's end nodes; coverage is the traversed share of the edge
    length from projecting those points onto it.
    """
    edges = {e.id: e for e in graph.all_edges()}
    frame = LocalFrame(ride.points[0].point)
    index = _EdgeIndex(graph, frame, {edges[eid].kind for eid in match.edge_ids})

    runs: list[tuple[str, list[int]]] = []
    for i, eid in enumerate(match.assignment):
        if eid is None:
            continue
        if runs and runs[-1][0] == eid:
            runs[-1][1].append(i)
        else:
            runs.append((eid, [i]))

    subs = []
    nodes = graph.nodes
    for eid, idxs in runs:
        edge = edges[eid]
        from_xy = frame.to_xy(nodes[edge.from_node].point)
        to_xy = frame.to_xy(nodes[edge.to_node].point)
        pts = [(i, frame.to_xy(ride.points[i].point)) for i in idxs]
        entry_i = min(pts, key=lambda it: math.hypot(it[1][0] - from_xy[0], it[1][1] - from_xy[1]))[0]
        exit_i = min(pts, key=lambda it: math.hypot(it[1][0] - to_xy[0], it[1][1] - to_xy[1]))[0]
        entry_t = ride.points[entry_i].t
        exit_t = max(ride.points[exit_i].t, entry_t)
        arcs = [index.distance(xy, eid)[1] for _, xy in pts]
        coverage = (max(arcs) - min(arcs)) / max(edge.length, 1e-9)
        coverage = min(1.0, max(coverage, 1e-9))
        subs.append(
            MatchedSubTrajectory(
                edge_id=eid,
                entry=entry_t,
                exit=exit_t,
                coverage=coverage,
                points=tuple(ride.points[i] for i in idxs),
            )
        )
    return subs


# ---------------------------------------------------------------- statistics

def derive_popularity(counts: dict[str, int]) -> dict[str, float]:
    """Log-normalized visit share per edge: ln(1 + n) / ln(1 + max n).

    Zero everywhere when nothing was matched; the busiest edge scores 1.
    """
    if not counts:
        return {}
    peak = max(counts.values())
    if peak <= 0:
        return {eid: 0.0 for eid in counts}
    denom = math.log1p(peak)
    return {eid: math.log1p(max(n, 0)) / denom for eid, n in counts.items()}


def measured_median(subs: Sequence[MatchedSubTrajectory], min_coverage: float) -> float | None:
    """Median full-edge duration from well-covering sub-trajectories.

    Durations are scaled by 1/coverage so partial traversals still
    estimate the full edge. Returns None when nothing passes the
    coverage filter.
    """
    durations = [s.duration / s.coverage for s in subs if s.coverage >= min_coverage]
    if not durations:
        return None
    return statistics.median(durations)


def _speed_model(samples: list[tuple[float, float]]) -> tuple[float, float]:
    """Linear fit of speed vs. mean absolute steepness; degenerates to a
    constant when there is only one sample."""
    if len(samples) == 1:
        return 0.0, samples[0][1]
    xs = np.array([s[0] for s in samples])
    ys = np.array([s[1] for s in samples])
    if np.allclose(xs, xs[0]):
        return 0.0, float(ys.mean())
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def _mean_abs_steepness(edge: Edge) -> float:
    vals = [abs(s.steepness) for s in edge.subsegments if s.steepness is not None]
    return sum(vals) / len(vals) if vals else 0.0


def derive_travel_times(
    samples: dict[str, list[MatchedSubTrajectory]],
    graph: ResortGraph,
    cfg: PipelineConfig | None = None,
) -> dict[str, tuple[float, TravelTimeSource]]:
    """Median travel time per edge, interpolated where data is thin.

    Edges with enough well-covering sub-trajectories get the measured
    median; the threshold is a tenth of the average sample count of their
    kind, floored at 10. The rest get length / predicted speed from a
    per-kind linear regression of measured speed against mean absolute
    steepness.
    """
    cfg = cfg or PipelineConfig()
    out: dict[str, tuple[float, TravelTimeSource]] = {}
    for kind, edges in (("slope", graph.slopes()), ("lift", graph.lifts())):
        if not edges:
            continue
        kept: dict[str, list[MatchedSubTrajectory]] = {}
        for e in edges:
            kept[e.id] = [s for s in samples.get(e.id, []) if s.coverage >= cfg.min_coverage]
        mean_kept = sum(len(v) for v in kept.values()) / len(edges)
        threshold = max(cfg.measured_floor, cfg.measured_fraction * mean_kept)

        measured: dict[str, float] = {}
        for e in edges:
            if len(kept[e.id]) >= threshold:
                med = measured_median(kept[e.id], cfg.min_coverage)
                if med is not None and med > 0:
                    measured[e.id] = med
        regression_samples = []
        by_id = {e.id: e for e in edges}
        for eid, med in measured.items():
            edge = by_id[eid]
            if edge.length > 0 and med > 0:
                regression_samples.append((_mean_abs_steepness(edge), edge.length / med))

        for e in edges:
            if e.id in measured:
                out[e.id] = (measured[e.id], TravelTimeSource.MEASURED)
                continue
            if not regression_samples:
                continue  # flagged below
            slope, intercept = _speed_model(regression_samples)
            speed = max(slope * _mean_abs_steepness(e) + intercept, 0.2)
            out[e.id] = (e.length / speed, TravelTimeSource.INTERPOLATED)
        if not regression_samples and any(samples.get(e.id) for e in edges):
            raise NoDataError(f"no measured {kind} edge to interpolate from")
    return out


# ---------------------------------------------------------------- pipeline

@dataclass
class PipelineStats:
    accepted: int = 0
    rejected: dict[str, int] = field(default_factory=dict)
    rides: int = 0
    matched_rides: int = 0
    unmatched_rides: int = 0
    sub_trajectories: int = 0
    edge_counts: dict[str, int] = field(default_factory=dict)
    travel_times: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": dict(sorted(self.rejected.items())),
            "rides": self.rides,
            "matched_rides": self.matched_rides,
            "unmatched_rides": self.unmatched_rides,
            "sub_trajectories": self.sub_trajectories,
            "edge_counts": dict(sorted(self.edge_counts.items())),
            "travel_times": dict(sorted(self.travel_times.items())),
        }


def run_pipeline(
    graph: ResortGraph,
    tracks: Iterable[ActivityTrack],
    cfg: PipelineConfig | None = None,
) -> PipelineStats:
    """Run the full trajectory pipeline and fold the results into the graph.

    Slope popularity and per-edge median travel times are written onto
    the edges; everything else lands in the returned statistics.
    """
    cfg = cfg or PipelineConfig()
    stats = PipelineStats()
    samples: dict[str, list[MatchedSubTrajectory]] = {}
    for track in tracks:
        verdict = filter_activity(track, cfg)
        if not verdict.accepted:
            stats.rejected[verdict.reason] = stats.rejected.get(verdict.reason, 0) + 1
            continue
        stats.accepted += 1
        for ride in segment_by_altitude(track, cfg):
            stats.rides += 1
            try:
                match = map_match(ride, graph, cfg)
            except NoMatchError:
                stats.unmatched_rides += 1
                continue
            stats.matched_rides += 1
            for sub in split_at_intersections(ride, match, graph):
                samples.setdefault(sub.edge_id, []).append(sub)
                stats.sub_trajectories += 1

    stats.edge_counts = {eid: len(subs) for eid, subs in sorted(samples.items())}

    slope_counts = {e.id: len(samples.get(e.id, [])) for e in graph.slopes()}
    popularity = derive_popularity(slope_counts)
    for e in graph.slopes():
        e.popularity = popularity.get(e.id, 0.0)

    try:
        times = derive_travel_times(samples, graph, cfg)
    except NoDataError:
        times = {}
    edges = {e.id: e for e in graph.all_edges()}
    for eid, (seconds, source) in times.items():
        edges[eid].median_travel_time = seconds
        edges[eid].travel_time_source = source
        stats.travel_times[eid] = source.value
    return stats
