// Central client state: preferences, favorites, the current ranking and
// plan. Panels subscribe to change events; in-flight responses are
// guarded by sequence numbers so a stale answer never wins.

import type { ApiClient } from "./api.js";
import type { PlanResponse, Preference, SlopeScore } from "./types.js";

export type StateEvent = "prefs" | "rank" | "favorites" | "plan" | "selection";

export function defaultPreferences(): Preference[] {
  return [
    { attribute: "steepness", weight: 0.8, target: 30, sigma: 10 },
    { attribute: "altitude", weight: 0.0, target: 2000, sigma: 300 },
    { attribute: "compass", weight: 0.0, target: ["S"] },
    { attribute: "grooming", weight: 0.4, target: ["groomed"] },
    { attribute: "crowdedness", weight: 0.0, target: 0.0, sigma: 0.25 },
  ];
}

export class Store {
  preferences: Preference[] = defaultPreferences();
  bestMatches: SlopeScore[] = [];
  favorites = new Set<string>();
  plan: PlanResponse | null = null;
  selection: string | null = null;
  startNode: string | null = null;
  endNode: string | null = null;

  private rankSeq = 0;
  private planSeq = 0;
  private listeners = new Map<StateEvent, Set<() => void>>();

  constructor(public api: ApiClient) {}

  on(event: StateEvent, handler: () => void): void {
    if (!this.listeners.has(event)) this.listeners.set(event, new Set());
    this.listeners.get(event)!.add(handler);
  }

  private emit(event: StateEvent): void {
    for (const handler of this.listeners.get(event) ?? []) handler();
  }

  /** Preferences that take part in scoring (weight above zero). */
  activePreferences(): Preference[] {
    return this.preferences.filter((p) => p.weight > 0);
  }

  setPreference(attribute: Preference["attribute"], patch: Partial<Preference>): void {
    this.preferences = this.preferences.map((p) =>
      p.attribute === attribute ? { ...p, ...patch } : p,
    );
    this.emit("prefs");
  }

  setPreset(preferences: Preference[]): void {
    this.preferences = preferences;
    this.emit("prefs");
  }

  /**
   * Re-query the ranking. The list keeps exactly the response order:
   * the server is the single source of truth for scores.
   */
  async refreshRank(limit?: number): Promise<SlopeScore[]> {
    const active = this.activePreferences();
    if (active.length === 0) {
      this.bestMatches = [];
      this.rankSeq += 1;
      this.emit("rank");
      return [];
    }
    const seq = ++this.rankSeq;
    const response = await this.api.rank(active, limit);
    if (seq !== this.rankSeq) {
      return this.bestMatches; // a newer request already landed
    }
    this.bestMatches = response.scores;
    this.emit("rank");
    return this.bestMatches;
  }

  toggleFavorite(edgeId: string): boolean {
    if (this.favorites.has(edgeId)) {
      this.favorites.delete(edgeId);
    } else {
      this.favorites.add(edgeId);
    }
    this.emit("favorites");
    return this.favorites.has(edgeId);
  }

  favoriteList(): string[] {
    return [...this.favorites].sort();
  }

  select(edgeId: string | null): void {
    this.selection = edgeId;
    this.emit("selection");
  }

  setEndpoints(start: string | null, end: string | null): void {
    this.startNode = start;
    this.endNode = end;
  }

  /** Semi-automated plan around the currently toggled favorites. */
  async planSemi(start: string, end: string): Promise<PlanResponse> {
    return this.submitPlan({
      mode: "semi",
      start_node: start,
      end_node: end,
      favorites: this.favoriteList(),
      preferences: this.activePreferences(),
    });
  }

  /** Automated plan against a duration budget in seconds. */
  async planAuto(start: string, end: string, duration: number): Promise<PlanResponse> {
    return this.submitPlan({
      mode: "auto",
      start_node: start,
      end_node: end,
      duration,
      preferences: this.activePreferences(),
    });
  }

  private async submitPlan(request: Parameters<ApiClient["route"]>[0]): Promise<PlanResponse> {
    const seq = ++this.planSeq;
    const plan = await this.api.route(request);
    if (seq === this.planSeq) {
      this.plan = plan;
      this.emit("plan");
    }
    return plan;
  }

  /** Edge ids on the current plan, for the heart markers in the list. */
  routeEdgeSet(): Set<string> {
    return new Set(this.plan?.route.edges ?? []);
  }
}
