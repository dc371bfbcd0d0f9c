"""Preference-weighted routing: costed graph, shortest paths, favorite
sequencing, and the two planning workflows.

Slope arcs carry their preference cost, lift arcs always cost twice the
worst possible slope cost (2 * K) so descents are preferred over rides,
and helper connectors cost a small positive amount per piece so they
never act as free shortcuts.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    EmptyPlanError,
    InfeasibleDurationError,
    MissingAttributeError,
    UnknownEdgeError,
    UnknownNodeError,
    UnreachableError,
    UnreachableFavoriteError,
)
from .model import Difficulty, Edge, HelperEdge, LiftEdge, ResortGraph, SlopeEdge
from .prefs import PreferenceSet, score_and_rank, slope_cost
from .segments import steepness_class

LIFT_COST_FACTOR = 2.0
HELPER_COST_PER_SEGMENT = 0.1
#: Fallback speeds (m/s) when an edge has no derived travel time.
NOMINAL_SPEED = {"slope": 5.0, "lift": 2.5, "helper": 1.0}
WALKING_SPEED = 1.0  # helpers always use this in summaries

DURATION_WINDOW_LOW = 0.90
DURATION_WINDOW_HIGH = 1.10
EXACT_TSP_LIMIT = 8


@dataclass(frozen=True)
class Arc:
    """One directed traversal of an edge."""

    edge_id: str
    from_node: str
    to_node: str
    cost: float
    kind: str
    reverse: bool = False


@dataclass
class CostedGraph:
    graph: ResortGraph
    arcs: list[Arc]
    adjacency: dict[str, tuple[Arc, ...]]
    warnings: list[str] = field(default_factory=list)

    def forward_arc(self, edge_id: str) -> Arc:
        for arc in self.arcs:
            if arc.edge_id == edge_id and not arc.reverse:
                return arc
        raise UnknownEdgeError(edge_id)


def build_costed_graph(graph: ResortGraph, prefs: PreferenceSet) -> CostedGraph:
    """Assign a routing cost to every directed traversal.

    Slopes whose attributes cannot satisfy the active preferences get the
    worst case cost K and a warning rather than dropping out of the
    network silently.
    """
    arcs: list[Arc] = []
    warnings: list[str] = []
    for edge in graph.all_edges():
        if isinstance(edge, SlopeEdge):
            try:
                cost = slope_cost(edge, prefs)
            except MissingAttributeError as exc:
                cost = float(edge.K)
                warnings.append(f"{edge.id}: worst-case cost, {exc}")
            arcs.append(Arc(edge.id, edge.from_node, edge.to_node, cost, "slope"))
        elif isinstance(edge, LiftEdge):
            cost = LIFT_COST_FACTOR * edge.K
            arcs.append(Arc(edge.id, edge.from_node, edge.to_node, cost, "lift"))
            if edge.bidirectional:
                arcs.append(Arc(edge.id, edge.to_node, edge.from_node, cost, "lift", reverse=True))
        elif isinstance(edge, HelperEdge):
            cost = HELPER_COST_PER_SEGMENT * edge.K
            arcs.append(Arc(edge.id, edge.from_node, edge.to_node, cost, "helper"))
            arcs.append(Arc(edge.id, edge.to_node, edge.from_node, cost, "helper", reverse=True))

    adjacency: dict[str, list[Arc]] = {nid: [] for nid in graph.nodes}
    for arc in arcs:
        adjacency[arc.from_node].append(arc)
    frozen = {nid: tuple(sorted(out, key=lambda a: (a.edge_id, a.reverse))) for nid, out in adjacency.items()}
    return CostedGraph(graph=graph, arcs=arcs, adjacency=frozen, warnings=warnings)


@dataclass(frozen=True)
class Route:
    steps: tuple[Arc, ...]
    nodes: tuple[str, ...]
    cost: float
    favorites_covered: frozenset[str] = frozenset()

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(a.edge_id for a in self.steps)

    def to_dict(self) -> dict:
        return {
            "edges": list(self.edge_ids),
            "nodes": list(self.nodes),
            "cost": self.cost,
            "favorites_covered": sorted(self.favorites_covered),
        }


def shortest_route(cg: CostedGraph, from_node: str, to_node: str) -> Route:
    """Minimum-cost directed path between two nodes.

    Ties break on fewer edges, then lexicographically smaller edge id
    sequence, which makes results reproducible across runs.
    """
    for nid in (from_node, to_node):
        if nid not in cg.graph.nodes:
            raise UnknownNodeError(nid)
    if from_node == to_node:
        return Route(steps=(), nodes=(from_node,), cost=0.0)

    counter = itertools.count()
    heap: list[tuple] = [(0.0, 0, (), next(counter), from_node, ())]
    settled: set[str] = set()
    while heap:
        cost, hops, edge_ids, _, node, arcs = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == to_node:
            nodes = (from_node,) + tuple(a.to_node for a in arcs)
            return Route(steps=arcs, nodes=nodes, cost=cost)
        for arc in cg.adjacency[node]:
            if arc.to_node in settled:
                continue
            heapq.heappush(
                heap,
                (
                    cost + arc.cost,
                    hops + 1,
                    edge_ids + (arc.edge_id,),
                    next(counter),
                    arc.to_node,
                    arcs + (arc,),
                ),
            )
    raise UnreachableError(f"no directed path from {from_node} to {to_node}")


def _dijkstra_costs(cg: CostedGraph, source: str) -> dict[str, float]:
    """Cheapest cost from source to every reachable node."""
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done: set[str] = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        for arc in cg.adjacency[node]:
            nd = d + arc.cost
            if nd < dist.get(arc.to_node, float("inf")):
                dist[arc.to_node] = nd
                heapq.heappush(heap, (nd, arc.to_node))
    return dist


def _concat(a: Route, b: Route) -> Route:
    assert a.nodes[-1] == b.nodes[0]
    return Route(
        steps=a.steps + b.steps,
        nodes=a.nodes + b.nodes[1:],
        cost=a.cost + b.cost,
        favorites_covered=a.favorites_covered | b.favorites_covered,
    )


def sequence_favorites(
    cg: CostedGraph, start: str, end: str, favorites: Sequence[str]
) -> list[str]:
    """Order favorite edges into the cheapest start-to-end chain.

    The pairwise distance from one favorite to the next is the routing
    cost between their nodes plus the next favorite's own cost, so the
    ordering reflects preference quality as well as geography. Up to
    eight favorites are sequenced exactly by enumeration; larger sets use
    nearest-neighbor construction refined by 2-opt swaps.
    """
    for nid in (start, end):
        if nid not in cg.graph.nodes:
            raise UnknownNodeError(nid)
    if not favorites:
        return []
    fav_arcs = {}
    for fid in favorites:
        fav_arcs[fid] = cg.forward_arc(fid)

    cost_from: dict[str, dict[str, float]] = {start: _dijkstra_costs(cg, start)}
    for fid, arc in fav_arcs.items():
        cost_from.setdefault(arc.to_node, _dijkstra_costs(cg, arc.to_node))

    inf = float("inf")
    for fid, arc in fav_arcs.items():
        if cost_from[start].get(arc.from_node, inf) == inf or (
            end not in cost_from[arc.to_node] and arc.to_node != end
        ):
            raise UnreachableFavoriteError(fid)

    ids = sorted(fav_arcs)

    def leg(src_node: str, fid: str) -> float:
        arc = fav_arcs[fid]
        return cost_from[src_node].get(arc.from_node, inf) + arc.cost

    def chain_cost(order: Sequence[str]) -> float:
        total = leg(start, order[0])
        for prev, cur in zip(order, order[1:]):
            total += leg(fav_arcs[prev].to_node, cur)
        tail = cost_from[fav_arcs[order[-1]].to_node].get(end, inf)
        return total + tail

    if len(ids) <= EXACT_TSP_LIMIT:
        best_order, best_cost = None, inf
        for perm in itertools.permutations(ids):
            c = chain_cost(perm)
            if c < best_cost or (c == best_cost and best_order is not None and perm < best_order):
                best_order, best_cost = perm, c
        if best_cost == inf:
            raise UnreachableFavoriteError(best_order[0] if best_order else ids[0])
        return list(best_order)

    # nearest-neighbor start, then 2-opt until no swap improves
    remaining = set(ids)
    order: list[str] = []
    cursor = start
    while remaining:
        nxt = min(remaining, key=lambda f: (leg(cursor, f), f))
        order.append(nxt)
        remaining.discard(nxt)
        cursor = fav_arcs[nxt].to_node
    best_cost = chain_cost(order)
    if best_cost == inf:
        raise UnreachableFavoriteError(order[0])
    improved = True
    while improved:
        improved = False
        for i in range(len(order) - 1):
            for j in range(i + 1, len(order)):
                candidate = order[:i] + order[i : j + 1][::-1] + order[j + 1 :]
                c = chain_cost(candidate)
                if c < best_cost - 1e-12:
                    order, best_cost = candidate, c
                    improved = True
    return order


@dataclass(frozen=True)
class ProfileSample:
    cum_length: float
    altitude: float | None
    steepness: float | None
    edge_id: str

    def to_dict(self) -> dict:
        return {
            "cum_length": self.cum_length,
            "altitude": self.altitude,
            "steepness": self.steepness,
            "edge_id": self.edge_id,
        }


@dataclass(frozen=True)
class RouteSummary:
    vertical_descent: float
    total_length: float
    estimated_time: float
    difficulty_distribution: dict[str, float]
    steepness_distribution: dict[str, float]
    profile: tuple[ProfileSample, ...]

    def to_dict(self) -> dict:
        return {
            "vertical_descent": self.vertical_descent,
            "total_length": self.total_length,
            "estimated_time": self.estimated_time,
            "difficulty_distribution": self.difficulty_distribution,
            "steepness_distribution": self.steepness_distribution,
            "profile": [p.to_dict() for p in self.profile],
        }


def edge_travel_time(edge: Edge) -> float:
    """Estimated traversal seconds; helpers walk, everything else uses its
    derived median or a nominal speed."""
    if edge.kind == "helper":
        return edge.length / WALKING_SPEED
    if edge.median_travel_time is not None:
        return edge.median_travel_time
    return edge.length / NOMINAL_SPEED[edge.kind]


def summarize(route: Route, graph: ResortGraph) -> RouteSummary:
    """Aggregate statistics and the altitude profile for a route.

    Both distribution rings cover every meter of the route: slopes and
    helpers fall into their steepness or declared class (helpers count as
    easy flats), lift travel shows up as its own class in the outer ring
    and as uphill in the inner one.
    """
    edges = {e.id: e for e in graph.all_edges()}
    total_length = 0.0
    descent = 0.0
    est_time = 0.0
    difficulty_lengths: dict[str, float] = {}
    steepness_lengths: dict[str, float] = {}
    profile: list[ProfileSample] = []

    for arc in route.steps:
        edge = edges[arc.edge_id]
        est_time += edge_travel_time(edge)
        segs = edge.subsegments
        if arc.reverse:
            segs = tuple(reversed(segs))
        for seg in segs:
            steep = seg.steepness
            if steep is not None and arc.reverse:
                steep = -steep
            total_length += seg.length
            if edge.kind == "lift":
                diff_key = "lift"
            elif edge.kind == "helper":
                diff_key = Difficulty.EASY.value
            else:
                diff_key = edge.declared_difficulty.value if edge.declared_difficulty else "unclassified"
            difficulty_lengths[diff_key] = difficulty_lengths.get(diff_key, 0.0) + seg.length
            steep_key = steepness_class(steep) if steep is not None else "unclassified"
            steepness_lengths[steep_key] = steepness_lengths.get(steep_key, 0.0) + seg.length
            if edge.kind == "slope" and steep is not None and steep > 0:
                descent += steep / 100.0 * seg.length
            profile.append(
                ProfileSample(
                    cum_length=total_length,
                    altitude=seg.altitude,
                    steepness=steep,
                    edge_id=edge.id,
                )
            )

    def shares(lengths: dict[str, float]) -> dict[str, float]:
        total = sum(lengths.values())
        if total <= 0.0:
            return {}
        return {k: v / total for k, v in sorted(lengths.items())}

    return RouteSummary(
        vertical_descent=descent,
        total_length=total_length,
        estimated_time=est_time,
        difficulty_distribution=shares(difficulty_lengths),
        steepness_distribution=shares(steepness_lengths),
        profile=tuple(profile),
    )


@dataclass(frozen=True)
class PlanResult:
    route: Route
    summary: RouteSummary
    chosen_favorites: tuple[str, ...]
    freeride_disclaimer: bool

    def to_dict(self) -> dict:
        return {
            "route": self.route.to_dict(),
            "summary": self.summary.to_dict(),
            "chosen_favorites": list(self.chosen_favorites),
            "freeride_disclaimer": self.freeride_disclaimer,
        }


def _has_freeride(route: Route, graph: ResortGraph) -> bool:
    edges = {e.id: e for e in graph.all_edges()}
    return any(
        isinstance(edges[a.edge_id], SlopeEdge)
        and edges[a.edge_id].declared_difficulty == Difficulty.FREERIDE
        for a in route.steps
    )


def plan_semi_automated(
    cg: CostedGraph, start: str, end: str, favorites: Sequence[str]
) -> PlanResult:
    """Chain user-chosen favorites into one route from start to end.

    Favorites are sequenced first, then connected by shortest routes with
    each favorite traversed fully. A round trip (start == end) is valid
    as long as at least one favorite is given.
    """
    if start == end and not favorites:
        raise EmptyPlanError("a round trip needs at least one favorite")
    order = sequence_favorites(cg, start, end, favorites)
    route = Route(steps=(), nodes=(start,), cost=0.0)
    cursor = start
    for fid in order:
        arc = cg.forward_arc(fid)
        route = _concat(route, shortest_route(cg, cursor, arc.from_node))
        route = _concat(
            route,
            Route(steps=(arc,), nodes=(arc.from_node, arc.to_node), cost=arc.cost,
                  favorites_covered=frozenset({fid})),
        )
        cursor = arc.to_node
    route = _concat(route, shortest_route(cg, cursor, end))
    summary = summarize(route, cg.graph)
    return PlanResult(
        route=route,
        summary=summary,
        chosen_favorites=tuple(order),
        freeride_disclaimer=_has_freeride(route, cg.graph),
    )


def plan_automated(
    cg: CostedGraph,
    start: str,
    end: str,
    target_duration: float,
    prefs: PreferenceSet,
) -> PlanResult:
    """Pick favorites greedily by preference score to fill a time budget.

    The loop adds the best-scored slope that still fits within 110% of
    the target and stops once the estimate reaches 90% of it (or nothing
    more fits). Freeride slopes are only eligible when the preferences
    explicitly ask for ungroomed terrain; plans that still contain one
    carry a disclaimer flag.
    """
    if target_duration <= 0:
        raise InfeasibleDurationError("target duration must be positive")
    high = DURATION_WINDOW_HIGH * target_duration
    low = DURATION_WINDOW_LOW * target_duration

    def plan_for(chosen: Sequence[str]) -> PlanResult:
        if not chosen:
            if start == end:
                empty = Route(steps=(), nodes=(start,), cost=0.0)
                return PlanResult(empty, summarize(empty, cg.graph), (), False)
            route = shortest_route(cg, start, end)
            return PlanResult(route, summarize(route, cg.graph), (),
                              _has_freeride(route, cg.graph))
        return plan_semi_automated(cg, start, end, chosen)

    base = plan_for([])
    if base.summary.estimated_time > high:
        raise InfeasibleDurationError(
            f"direct route takes {base.summary.estimated_time:.0f}s, "
            f"budget allows {high:.0f}s"
        )

    allow_freeride = prefs.wants_ungroomed()
    edges = {e.id: e for e in cg.graph.all_edges()}
    candidates = [
        s.edge_id
        for s in score_and_rank(cg.graph, prefs)
        if allow_freeride or edges[s.edge_id].declared_difficulty != Difficulty.FREERIDE
    ]

    chosen: list[str] = []
    best = base
    while best.summary.estimated_time < low:
        added = False
        for cand in candidates:
            if cand in chosen:
                continue
            try:
                trial = plan_for(chosen + [cand])
            except (UnreachableFavoriteError, UnreachableError):
                continue
            if trial.summary.estimated_time <= high:
                chosen.append(cand)
                best = trial
                added = True
                break
        if not added:
            break
    return best
