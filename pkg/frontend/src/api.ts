// Thin typed client around the HTTP API. The fetch implementation is
// injectable so tests can serve canned fixture responses.

import type {
  PlanResponse,
  Preference,
  RankResponse,
  ResortGeoJson,
  RouteRequest,
  TooltipPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as T;
  }

  resort(): Promise<ResortGeoJson> {
    return this.request("/api/resort");
  }

  slope(id: string): Promise<TooltipPayload> {
    return this.request(`/api/slopes/${encodeURIComponent(id)}`);
  }

  rank(preferences: Preference[], limit?: number): Promise<RankResponse> {
    return this.request("/api/rank", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(limit === undefined ? { preferences } : { preferences, limit }),
    });
  }

  route(request: RouteRequest): Promise<PlanResponse> {
    return this.request("/api/route", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  heatmapUrl(bbox: [number, number, number, number], cell = 5): string {
    return `${this.base}/api/heatmap?bbox=${bbox.join(",")}&cell=${cell}`;
  }
}
