// Contract tests against a mocked API serving fixture responses. They
// pin the client's side of the wire contract: no reordering, no
// recomputation, favorites pass through verbatim.

import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { donutSegments } from "../src/charts.js";
import { Store } from "../src/state.js";
import type { PlanResponse, RankResponse } from "../src/types.js";

const RANK_FIXTURE: RankResponse = {
  scores: [
    { edge_id: "s2", cost: 0.0787, s_pref: 0.9803, segment_costs: [0, 0, 0, 0.0787] },
    { edge_id: "s1", cost: 0.4249, s_pref: 0.8938, segment_costs: [0.1, 0.1, 0.1, 0.12] },
    { edge_id: "s3", cost: 0.8211, s_pref: 0.7947, segment_costs: [0.2, 0.2, 0.2, 0.22] },
    { edge_id: "s4", cost: 1.5933, s_pref: 0.6017, segment_costs: [0.4, 0.4, 0.4, 0.39] },
    { edge_id: "s5", cost: 2.311, s_pref: 0.4223, segment_costs: [0.6, 0.6, 0.6, 0.51] },
  ],
};

const PLAN_FIXTURE: PlanResponse = {
  route: {
    edges: ["l1", "s2", "l1", "s1"],
    nodes: ["base", "top", "base", "top", "base"],
    cost: 16.5,
    favorites_covered: ["s1", "s2"],
  },
  summary: {
    vertical_descent: 72,
    total_length: 480,
    estimated_time: 3300,
    difficulty_distribution: { intermediate: 0.5, lift: 0.5 },
    steepness_distribution: { easy: 0.0625, intermediate: 0.4375, uphill: 0.5 },
    profile: [
      { cum_length: 120, altitude: 2250, steepness: -40, edge_id: "l1" },
      { cum_length: 240, altitude: 2400, steepness: 32, edge_id: "s2" },
      { cum_length: 360, altitude: 2250, steepness: -40, edge_id: "l1" },
      { cum_length: 480, altitude: 2400, steepness: 30, edge_id: "s1" },
    ],
  },
  chosen_favorites: ["s1", "s2"],
  freeride_disclaimer: false,
};

interface Captured {
  url: string;
  body: unknown;
}

function mockedApi(responses: Record<string, unknown>, captured: Captured[] = []): ApiClient {
  const fetchImpl: FetchLike = async (url, init) => {
    captured.push({ url, body: init?.body ? JSON.parse(init.body as string) : null });
    const path = url.split("?")[0];
    const payload = responses[path];
    if (payload === undefined) {
      return new Response(JSON.stringify({ error: "not found" }), { status: 404 });
    }
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  };
  return new ApiClient("", fetchImpl);
}

describe("best matches list", () => {
  it("keeps exactly the response ordering", async () => {
    const store = new Store(mockedApi({ "/api/rank": RANK_FIXTURE }));
    const scores = await store.refreshRank();
    expect(scores.map((s) => s.edge_id)).toEqual(["s2", "s1", "s3", "s4", "s5"]);
    expect(store.bestMatches).toEqual(RANK_FIXTURE.scores);
  });

  it("passes active preferences through unchanged", async () => {
    const captured: Captured[] = [];
    const store = new Store(mockedApi({ "/api/rank": RANK_FIXTURE }, captured));
    await store.refreshRank();
    const sent = captured[0].body as { preferences: { attribute: string; weight: number }[] };
    expect(sent.preferences.length).toBe(store.activePreferences().length);
    expect(sent.preferences.every((p) => p.weight > 0)).toBe(true);
  });

  it("discards stale responses by sequence number", async () => {
    let release: (() => void) | null = null;
    const slowFirst: FetchLike = async (url, init) => {
      const body = init?.body ? JSON.parse(init.body as string) : null;
      const slow = body?.limit === 1;
      if (slow) {
        await new Promise<void>((resolve) => (release = resolve));
        return new Response(JSON.stringify({ scores: RANK_FIXTURE.scores.slice(0, 1) }), { status: 200 });
      }
      return new Response(JSON.stringify(RANK_FIXTURE), { status: 200 });
    };
    const store = new Store(new ApiClient("", slowFirst));
    const first = store.refreshRank(1); // will resolve late
    const second = store.refreshRank(); // lands first
    await second;
    release!();
    await first;
    expect(store.bestMatches.map((s) => s.edge_id)).toEqual(["s2", "s1", "s3", "s4", "s5"]);
  });
});

describe("summary donut", () => {
  it("renders ring fractions equal to the response within 0.5 %", () => {
    for (const distribution of [
      PLAN_FIXTURE.summary.difficulty_distribution,
      PLAN_FIXTURE.summary.steepness_distribution,
    ]) {
      const segments = donutSegments(distribution, {}, 70, 70, 60, 40);
      const byKey = Object.fromEntries(segments.map((s) => [s.key, s.fraction]));
      for (const [key, value] of Object.entries(distribution)) {
        if (value <= 0) continue;
        expect(Math.abs(byKey[key] - value)).toBeLessThanOrEqual(0.005);
      }
      const total = segments.reduce((acc, s) => acc + s.fraction, 0);
      expect(Math.abs(total - 1)).toBeLessThanOrEqual(1e-9);
    }
  });

  it("covers the full ring with valid arc paths", () => {
    const segments = donutSegments({ easy: 0.3, lift: 0.7 }, {}, 70, 70, 60, 40);
    expect(segments).toHaveLength(2);
    for (const segment of segments) {
      expect(segment.path.startsWith("M ")).toBe(true);
      expect(segment.path).toContain("A 60");
    }
  });
});

describe("favorite round trip", () => {
  it("sends exactly the toggled ids in a semi-automated request", async () => {
    const captured: Captured[] = [];
    const store = new Store(mockedApi({ "/api/route": PLAN_FIXTURE }, captured));
    store.toggleFavorite("s2");
    store.toggleFavorite("s4");
    store.toggleFavorite("s1");
    store.toggleFavorite("s4"); // off again
    await store.planSemi("base", "base");

    const request = captured.find((c) => c.url.endsWith("/api/route"))!;
    const body = request.body as { mode: string; favorites: string[] };
    expect(body.mode).toBe("semi");
    expect([...body.favorites].sort()).toEqual(["s1", "s2"]);
    expect(body.favorites).toHaveLength(2);
  });

  it("toggling reports the new state and updates the set", () => {
    const store = new Store(mockedApi({}));
    expect(store.toggleFavorite("s3")).toBe(true);
    expect(store.toggleFavorite("s3")).toBe(false);
    expect(store.favoriteList()).toEqual([]);
  });

  it("marks route membership for the hearts in the list", async () => {
    const store = new Store(mockedApi({ "/api/route": PLAN_FIXTURE }));
    store.toggleFavorite("s1");
    await store.planSemi("base", "base");
    const onRoute = store.routeEdgeSet();
    expect(onRoute.has("s2")).toBe(true);
    expect(onRoute.has("s5")).toBe(false);
  });
});
