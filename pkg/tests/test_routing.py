"""Routing checks against exhaustive oracles.

The path oracle enumerates every simple path by depth-first search; the
sequencing oracle enumerates every favorite permutation with oracle
pairwise distances. Neither shares code with the production router.
"""

import itertools
import math

import numpy as np
import pytest

from skigraph.errors import (
    EmptyPlanError,
    InfeasibleDurationError,
    UnreachableError,
    UnreachableFavoriteError,
)
from skigraph.model import Difficulty
from skigraph.prefs import PreferenceSet
from skigraph.routing import (
    build_costed_graph,
    plan_automated,
    plan_semi_automated,
    sequence_favorites,
    shortest_route,
    summarize,
)

import fixture_resorts as fr
from test_prefs import GOLDEN


def enumerate_min_cost(cg, start, end):
    """Cheapest simple path by brute-force DFS; inf when unreachable."""
    if start == end:
        return 0.0
    best = [math.inf]

    def dfs(node, visited, cost):
        if cost >= best[0]:
            return
        for arc in cg.adjacency[node]:
            if arc.to_node == end:
                best[0] = min(best[0], cost + arc.cost)
            elif arc.to_node not in visited:
                dfs(arc.to_node, visited | {arc.to_node}, cost + arc.cost)

    dfs(start, {start}, 0.0)
    return best[0]


def simple_prefs(target=25.0):
    return PreferenceSet.from_json(
        [{"attribute": "steepness", "weight": 1.0, "target": target, "sigma": 10}]
    )


# ------------------------------------------------------------- costed graph

def test_lift_cost_is_twice_segment_count(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    lift = next(e for e in five_slope.edges if e.kind == "lift")
    arc = cg.forward_arc("l1")
    assert arc.cost == 2.0 * lift.K == 8.0


def test_bidirectional_lift_produces_two_arcs():
    graph = fr.random_resort(seed=101)
    lift = next(e for e in graph.edges if e.id == "L2")
    lift.bidirectional = True
    cg = build_costed_graph(graph, simple_prefs())
    arcs = [a for a in cg.arcs if a.edge_id == "L2"]
    assert len(arcs) == 2
    assert {a.reverse for a in arcs} == {False, True}
    assert all(a.cost == 2.0 * lift.K for a in arcs)


def test_perfect_match_slope_costs_zero(five_slope):
    prefs = PreferenceSet.from_json(
        [{"attribute": "altitude", "weight": 1.0, "target": 2400, "sigma": 300}]
    )
    cg = build_costed_graph(five_slope, prefs)
    assert cg.forward_arc("s2").cost == 0.0


def test_missing_attributes_get_worst_case_cost(five_slope):
    for e in five_slope.edges:
        if e.id == "s1":
            e.popularity = None
    prefs = PreferenceSet.from_json(
        [{"attribute": "crowdedness", "weight": 1.0, "target": 0.0, "sigma": 0.25}]
    )
    cg = build_costed_graph(five_slope, prefs)
    assert cg.forward_arc("s1").cost == 4.0
    assert any("s1" in w for w in cg.warnings)


def test_all_costs_non_negative():
    for seed in range(10):
        graph = fr.random_resort(seed)
        rng = np.random.RandomState(seed)
        prefs = PreferenceSet.from_json(fr.random_preferences(rng))
        cg = build_costed_graph(graph, prefs)
        assert all(a.cost >= 0.0 for a in cg.arcs)


# ------------------------------------------------------------- shortest path

def test_trivial_route_from_to_same_node(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    route = shortest_route(cg, "base", "base")
    assert route.edge_ids == ()
    assert route.cost == 0.0
    assert route.nodes == ("base",)


def test_diamond_picks_cheap_chain():
    """Two chains between the same nodes; the preferred one wins."""
    top, mid_a, mid_b, bottom = fr.pt(0, 400), fr.pt(-40, 200), fr.pt(40, 200), fr.pt(0, 0)
    cheap = [(30.0, 25.0, 2000.0, "S")] * 3
    dear = [(30.0, 55.0, 2000.0, "S")] * 3
    edges = [
        fr.hand_slope("a1", "cheap upper", "T", "MA", [top, mid_a], cheap, difficulty=Difficulty.EASY),
        fr.hand_slope("a2", "cheap lower", "MA", "B", [mid_a, bottom], cheap, difficulty=Difficulty.EASY),
        fr.hand_slope("b1", "dear upper", "T", "MB", [top, mid_b], dear, difficulty=Difficulty.ADVANCED),
        fr.hand_slope("b2", "dear lower", "MB", "B", [mid_b, bottom], dear, difficulty=Difficulty.ADVANCED),
    ]
    from skigraph.model import Node, ResortGraph

    graph = ResortGraph(name="diamond")
    for nid, p in (("T", top), ("MA", mid_a), ("MB", mid_b), ("B", bottom)):
        graph.nodes[nid] = Node(id=nid, point=p)
    graph.edges = edges
    cg = build_costed_graph(graph, simple_prefs(25.0))
    route = shortest_route(cg, "T", "B")
    assert route.edge_ids == ("a1", "a2")
    assert route.cost == pytest.approx(enumerate_min_cost(cg, "T", "B"), abs=1e-12)


def test_unreachable_below_all_lifts(five_slope, golden_prefs):
    """Slopes only run downhill, so the top is unreachable without a lift."""
    graph = five_slope
    graph.edges = [e for e in graph.edges if e.kind != "lift"]
    cg = build_costed_graph(graph, golden_prefs)
    with pytest.raises(UnreachableError):
        shortest_route(cg, "base", "top")


def test_shortest_route_matches_enumeration_oracle():
    rng = np.random.RandomState(99)
    node_ids = list(fr.RANDOM_NODE_LAYOUT)
    checked = 0
    for seed in range(20):
        graph = fr.random_resort(seed)
        assert len(list(graph.all_edges())) <= 12
        for _ in range(5):
            prefs = PreferenceSet.from_json(fr.random_preferences(rng))
            cg = build_costed_graph(graph, prefs)
            src, dst = rng.choice(node_ids, size=2, replace=False)
            expected = enumerate_min_cost(cg, src, dst)
            if math.isinf(expected):
                with pytest.raises(UnreachableError):
                    shortest_route(cg, src, dst)
            else:
                route = shortest_route(cg, src, dst)
                assert route.cost == pytest.approx(expected, abs=1e-9)
                assert sum(a.cost for a in route.steps) == pytest.approx(route.cost, abs=1e-9)
            checked += 1
    assert checked == 100


def test_route_structure_and_directionality():
    rng = np.random.RandomState(5)
    for seed in range(8):
        graph = fr.random_resort(seed)
        edges = {e.id: e for e in graph.all_edges()}
        cg = build_costed_graph(graph, PreferenceSet.from_json(fr.random_preferences(rng)))
        for src, dst in itertools.permutations(fr.RANDOM_NODE_LAYOUT, 2):
            try:
                route = shortest_route(cg, src, dst)
            except UnreachableError:
                continue
            assert route.nodes[0] == src and route.nodes[-1] == dst
            for arc, (a, b) in zip(route.steps, zip(route.nodes, route.nodes[1:])):
                assert (arc.from_node, arc.to_node) == (a, b)
                edge = edges[arc.edge_id]
                if arc.kind == "slope":
                    # slopes only in travel direction
                    assert not arc.reverse
                    assert (arc.from_node, arc.to_node) == (edge.from_node, edge.to_node)


def test_deterministic_tie_breaking():
    """Two zero-cost parallel slopes: the smaller edge id wins."""
    top, bottom = fr.pt(0, 200), fr.pt(0, 0)
    spec = [(30.0, 30.0, 2000.0, "S")] * 2
    from skigraph.model import Node, ResortGraph

    graph = ResortGraph(name="tie")
    graph.nodes["T"] = Node(id="T", point=top)
    graph.nodes["B"] = Node(id="B", point=bottom)
    graph.edges = [
        fr.hand_slope("z2", "later", "T", "B", [top, bottom], spec, difficulty=Difficulty.EASY),
        fr.hand_slope("z1", "earlier", "T", "B", [top, bottom], spec, difficulty=Difficulty.EASY),
    ]
    cg = build_costed_graph(graph, simple_prefs(30.0))
    for _ in range(3):
        assert shortest_route(cg, "T", "B").edge_ids == ("z1",)


def test_reverse_lift_only_without_alternative():
    """A downhill lift ride is a last resort."""
    from skigraph.model import Node, ResortGraph

    valley, peak = fr.pt(0, 0), fr.pt(0, 500)
    lift_spec = [(250.0, -30.0, 1700.0, "N")] * 2
    slope_spec = [(30.0, 30.0, 1800.0, "S")] * 4

    def build(with_slope: bool):
        graph = ResortGraph(name="ridge")
        graph.nodes["V"] = Node(id="V", point=valley)
        graph.nodes["H"] = Node(id="H", point=peak)
        graph.edges = [
            fr.hand_lift("LV", "link", "V", "H", [valley, peak], lift_spec, bidirectional=True)
        ]
        if with_slope:
            graph.edges.append(
                fr.hand_slope("SH", "descent", "H", "V", [peak, valley], slope_spec,
                              difficulty=Difficulty.INTERMEDIATE)
            )
        return graph

    prefs = simple_prefs(30.0)
    with_slope = build_costed_graph(build(True), prefs)
    route = shortest_route(with_slope, "H", "V")
    assert route.edge_ids == ("SH",)
    assert not any(a.reverse for a in route.steps)

    without = build_costed_graph(build(False), prefs)
    route = shortest_route(without, "H", "V")
    assert route.edge_ids == ("LV",)
    assert route.steps[0].reverse
    # dropping reverse arcs really does cut the connection
    pruned = [a for a in without.arcs if not a.reverse]
    assert not any(a.from_node == "H" and a.to_node == "V" for a in pruned)


# ------------------------------------------------------------- sequencing

def oracle_chain_cost(cg, start, end, arcs_by_id, order):
    total = enumerate_min_cost(cg, start, arcs_by_id[order[0]].from_node) + arcs_by_id[order[0]].cost
    for prev, cur in zip(order, order[1:]):
        total += (
            enumerate_min_cost(cg, arcs_by_id[prev].to_node, arcs_by_id[cur].from_node)
            + arcs_by_id[cur].cost
        )
    return total + enumerate_min_cost(cg, arcs_by_id[order[-1]].to_node, end)


def oracle_best_order(cg, start, end, favorites):
    arcs_by_id = {fid: cg.forward_arc(fid) for fid in favorites}
    best_cost, best_order = math.inf, None
    for perm in itertools.permutations(sorted(favorites)):
        c = oracle_chain_cost(cg, start, end, arcs_by_id, perm)
        if c < best_cost:
            best_cost, best_order = c, perm
    return best_cost, best_order


def test_single_favorite_is_trivial(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    assert sequence_favorites(cg, "base", "base", ["s3"]) == ["s3"]


def test_three_favorite_fixture_unique_order():
    """Chain of mid stations forces the order (R1, R0, R3)."""
    graph = fr.random_resort(seed=3, n_extra_slopes=3, with_helper=False)
    # R0: M1->B, R1: M2->B, R2: T1->M1, R3: T2->M2 core + extras from seed 3
    prefs = simple_prefs(30.0)
    cg = build_costed_graph(graph, prefs)
    favorites = ["R0", "R1", "R2"]
    order = sequence_favorites(cg, "B", "B", favorites)
    best_cost, _ = oracle_best_order(cg, "B", "B", favorites)
    arcs_by_id = {fid: cg.forward_arc(fid) for fid in favorites}
    assert oracle_chain_cost(cg, "B", "B", arcs_by_id, tuple(order)) == pytest.approx(
        best_cost, abs=1e-9
    )
    # R2 feeds M1, so skiing R2 immediately before R0 is always optimal here
    assert order.index("R2") == order.index("R0") - 1


def test_sequencing_matches_permutation_oracle():
    rng = np.random.RandomState(1234)
    fixtures = 0
    sizes = itertools.cycle([3, 4, 5, 6, 7, 8])
    while fixtures < 50:
        seed = int(rng.randint(0, 10_000))
        n = next(sizes)
        graph = fr.random_resort(seed, n_extra_slopes=max(0, n - 4))
        slopes = [e.id for e in graph.slopes()]
        if len(slopes) < n:
            continue
        favorites = sorted(rng.choice(slopes, size=n, replace=False).tolist())
        prefs = PreferenceSet.from_json(fr.random_preferences(rng))
        cg = build_costed_graph(graph, prefs)
        start, end = "B", ("B" if rng.rand() < 0.5 else "T1")
        try:
            order = sequence_favorites(cg, start, end, favorites)
        except UnreachableFavoriteError:
            continue
        best_cost, _ = oracle_best_order(cg, start, end, favorites)
        arcs_by_id = {fid: cg.forward_arc(fid) for fid in favorites}
        got = oracle_chain_cost(cg, start, end, arcs_by_id, tuple(order))
        assert got == pytest.approx(best_cost, abs=1e-9)
        fixtures += 1


def test_nine_favorites_heuristic_within_bound():
    graph = fr.random_resort(seed=7, n_extra_slopes=5, with_helper=False)
    slopes = sorted(e.id for e in graph.slopes())
    assert len(slopes) == 9
    prefs = simple_prefs(35.0)
    cg = build_costed_graph(graph, prefs)
    order = sequence_favorites(cg, "B", "B", slopes)
    assert sorted(order) == slopes
    arcs_by_id = {fid: cg.forward_arc(fid) for fid in slopes}
    got = oracle_chain_cost(cg, "B", "B", arcs_by_id, tuple(order))
    best_cost, _ = oracle_best_order(cg, "B", "B", slopes)
    assert got <= 1.2 * best_cost + 1e-9


def test_unreachable_favorite_is_named(five_slope, golden_prefs):
    graph = five_slope
    from skigraph.model import Node

    island = fr.pt(5000, 5000)
    graph.nodes["island"] = Node(id="island", point=island)
    graph.edges.append(
        fr.hand_slope(
            "sx", "detached", "island", "island2", [island, fr.pt(5000, 4800)],
            [(30.0, 30.0, 2500.0, "S")] * 4, difficulty=Difficulty.EASY,
        )
    )
    graph.nodes["island2"] = Node(id="island2", point=fr.pt(5000, 4800))
    cg = build_costed_graph(graph, golden_prefs)
    with pytest.raises(UnreachableFavoriteError) as err:
        sequence_favorites(cg, "base", "base", ["s1", "sx"])
    assert err.value.edge_id == "sx"


# ------------------------------------------------------------- workflows

def test_semi_automated_round_trip(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_semi_automated(cg, "base", "base", ["s1"])
    assert plan.route.edge_ids == ("l1", "s1")
    assert plan.route.nodes == ("base", "top", "base")
    assert plan.route.favorites_covered == {"s1"}
    assert plan.summary.estimated_time == pytest.approx(900.0 + 700.0)


def test_semi_automated_without_favorites_degenerates(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_semi_automated(cg, "base", "top", [])
    direct = shortest_route(cg, "base", "top")
    assert plan.route.edge_ids == direct.edge_ids


def test_semi_automated_empty_round_trip_rejected(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    with pytest.raises(EmptyPlanError):
        plan_semi_automated(cg, "base", "base", [])


def test_adding_favorites_never_reduces_cost(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    cost_one = plan_semi_automated(cg, "base", "base", ["s2"]).route.cost
    cost_two = plan_semi_automated(cg, "base", "base", ["s2", "s1"]).route.cost
    cost_three = plan_semi_automated(cg, "base", "base", ["s2", "s1", "s5"]).route.cost
    assert cost_one <= cost_two + 1e-12
    assert cost_two <= cost_three + 1e-12


def automated_oracle(target):
    """Brute force over every subset and order on the 5-slope fixture.

    Durations are closed-form here: each favorite costs one lift ride
    plus its own slope time, independent of order. Scores come from the
    frozen golden table, so the oracle never calls the engine.
    """
    times = {sid: meta[3] for sid, meta in fr.FIVE_SLOPE_META.items()}
    s_pref = {sid: GOLDEN[sid][2] for sid in times}
    best_subset, best_sum = None, -1.0
    for r in range(len(times) + 1):
        for subset in itertools.combinations(sorted(times), r):
            duration = sum(fr.LIFT_TIME + times[s] for s in subset)
            if duration > 1.1 * target:
                continue
            total = sum(s_pref[s] for s in subset)
            if total > best_sum:
                best_subset, best_sum = set(subset), total
    return best_subset


def test_automated_plan_fills_duration_window(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_automated(cg, "base", "base", 7200.0, golden_prefs)
    assert 0.9 * 7200.0 <= plan.summary.estimated_time <= 1.1 * 7200.0
    assert set(plan.chosen_favorites) == automated_oracle(7200.0) == {"s1", "s2", "s3", "s4"}
    assert plan.summary.estimated_time == pytest.approx(4 * 900.0 + 700 + 800 + 750 + 850)


def test_automated_plan_matches_semi_automated_duplicate(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_automated(cg, "base", "base", 7200.0, golden_prefs)
    replay = plan_semi_automated(cg, "base", "base", list(plan.chosen_favorites))
    assert replay.route.edge_ids == plan.route.edge_ids
    assert replay.summary.estimated_time == plan.summary.estimated_time


def test_automated_plan_infeasible_duration(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    with pytest.raises(InfeasibleDurationError):
        plan_automated(cg, "base", "top", 300.0, golden_prefs)


def test_automated_plan_skips_freeride_by_default(five_slope, golden_prefs):
    for e in five_slope.edges:
        if e.id == "s2":
            e.declared_difficulty = Difficulty.FREERIDE
            e.groomed = False
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_automated(cg, "base", "base", 7200.0, golden_prefs)
    assert "s2" not in plan.chosen_favorites
    assert plan.freeride_disclaimer is False


def test_freeride_eligible_with_ungroomed_preference(five_slope):
    for e in five_slope.edges:
        if e.id == "s2":
            e.declared_difficulty = Difficulty.FREERIDE
            e.groomed = False
    prefs = PreferenceSet.from_json(
        [
            {"attribute": "steepness", "weight": 1.0, "target": 30, "sigma": 10},
            {"attribute": "grooming", "weight": 1.0, "target": ["ungroomed"]},
        ]
    )
    cg = build_costed_graph(five_slope, prefs)
    plan = plan_automated(cg, "base", "base", 7200.0, prefs)
    assert "s2" in plan.chosen_favorites
    assert plan.freeride_disclaimer is True


# ------------------------------------------------------------- summaries

def test_single_slope_summary_exact_values():
    """One 2 km slope dropping 400 m in 300 s reports exactly that."""
    from skigraph.model import Node, ResortGraph

    top, bottom = fr.pt(0, 2000), fr.pt(0, 0)
    spec = [(500.0, 20.0, 1800.0, "S")] * 4
    graph = ResortGraph(name="single")
    graph.nodes["T"] = Node(id="T", point=top)
    graph.nodes["B"] = Node(id="B", point=bottom)
    graph.edges = [
        fr.hand_slope("s0", "long run", "T", "B", [top, bottom], spec,
                      difficulty=Difficulty.EASY, time=300.0)
    ]
    cg = build_costed_graph(graph, simple_prefs(20.0))
    route = shortest_route(cg, "T", "B")
    summary = summarize(route, graph)
    assert summary.total_length == pytest.approx(2000.0)
    assert summary.vertical_descent == pytest.approx(400.0)
    assert summary.estimated_time == pytest.approx(300.0)
    assert summary.difficulty_distribution == {"easy": 1.0}
    assert summary.steepness_distribution == {"easy": 1.0}


def test_summary_distributions_sum_to_one(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_semi_automated(cg, "base", "base", ["s1", "s4"])
    for dist in (plan.summary.difficulty_distribution, plan.summary.steepness_distribution):
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(v > 0 for v in dist.values())


def test_summary_conservation_and_profile(five_slope, golden_prefs):
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_semi_automated(cg, "base", "base", ["s1"])
    s = plan.summary
    # every meter lands in a class on both rings
    for dist in (s.difficulty_distribution, s.steepness_distribution):
        assert sum(share * s.total_length for share in dist.values()) == pytest.approx(
            s.total_length, rel=1e-9
        )
    assert s.profile[-1].cum_length == pytest.approx(s.total_length, rel=1e-12)
    cums = [p.cum_length for p in s.profile]
    assert cums == sorted(cums)
    # the uphill lift ride shows in the inner ring, the ride itself in the outer
    assert s.steepness_distribution["uphill"] == pytest.approx(0.5)
    assert s.difficulty_distribution["lift"] == pytest.approx(0.5)


def test_summary_rings_can_disagree(five_slope, golden_prefs):
    """An easy-declared slope with a steep stretch shows advanced steepness
    share while the difficulty ring shows none."""
    edges = {e.id: e for e in five_slope.edges}
    s3 = edges["s3"]
    s3.subsegments = tuple(
        type(seg)(index=seg.index, start=seg.start, end=seg.end, length=seg.length,
                  altitude=seg.altitude, steepness=45.0 if seg.index == 1 else seg.steepness,
                  compass=seg.compass)
        for seg in s3.subsegments
    )
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_semi_automated(cg, "top", "base", ["s3"])
    s = plan.summary
    assert s.steepness_distribution.get("advanced", 0.0) > 0.0
    assert "advanced" not in s.difficulty_distribution
    assert s.difficulty_distribution.get("easy", 0.0) > 0.0


def test_vertical_descent_counts_only_downhill(five_slope, golden_prefs):
    edges = {e.id: e for e in five_slope.edges}
    s5 = edges["s5"]  # contains a 0 % piece, everything shallow downhill
    cg = build_costed_graph(five_slope, golden_prefs)
    plan = plan_semi_automated(cg, "top", "base", ["s5"])
    expected = sum(max(0.0, seg.steepness) / 100.0 * seg.length for seg in s5.subsegments)
    assert plan.summary.vertical_descent == pytest.approx(expected)
