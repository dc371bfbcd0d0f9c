// Mirrors of the wire schemas served by the HTTP API. The client never
// recomputes any of these numbers; it only renders them.

export type Difficulty = "easy" | "intermediate" | "advanced" | "freeride";

export interface EdgeProperties {
  id: string;
  kind: "slope" | "lift" | "helper";
  name: string;
  length_m: number;
  steepness: (number | null)[];
  median_travel_time: number | null;
  difficulty?: Difficulty | null;
  groomed?: boolean;
  ref?: string;
  popularity?: number | null;
  lift_type?: string;
  bidirectional?: boolean;
}

export interface EdgeFeature {
  type: "Feature";
  geometry: { type: "LineString"; coordinates: [number, number][] };
  properties: EdgeProperties;
}

export interface ResortNode {
  id: string;
  lon: number;
  lat: number;
  ele: number | null;
}

export interface ResortGeoJson {
  type: "FeatureCollection";
  name: string;
  features: EdgeFeature[];
  nodes: ResortNode[];
}

export interface SlopeScore {
  edge_id: string;
  cost: number;
  s_pref: number;
  segment_costs: number[];
}

export interface RankResponse {
  scores: SlopeScore[];
}

export interface ProfileSample {
  cum_length: number;
  altitude: number | null;
  steepness: number | null;
  edge_id: string;
}

export interface RouteSummary {
  vertical_descent: number;
  total_length: number;
  estimated_time: number;
  difficulty_distribution: Record<string, number>;
  steepness_distribution: Record<string, number>;
  profile: ProfileSample[];
}

export interface RouteBody {
  edges: string[];
  nodes: string[];
  cost: number;
  favorites_covered: string[];
}

export interface PlanResponse {
  route: RouteBody;
  summary: RouteSummary;
  chosen_favorites: string[];
  freeride_disclaimer: boolean;
}

export interface TooltipPayload {
  id: string;
  kind: string;
  name: string;
  length_m: number;
  descent_m: number;
  ascent_m: number;
  mean_steepness: number | null;
  max_steepness: number | null;
  median_travel_time: number | null;
  travel_time_source: string | null;
  compass_histogram: Record<string, number>;
  altitude_profile: { distance_m: number; altitude_m: number | null; steepness_pct: number | null }[];
  difficulty?: Difficulty | null;
  groomed?: boolean;
  popularity?: number | null;
  lift_type?: string;
  amenities?: { heated_seats: boolean; bubble: boolean; occupancy: number | null };
}

export type PreferenceTarget = number | string[];

export interface Preference {
  attribute: "steepness" | "altitude" | "compass" | "grooming" | "crowdedness";
  weight: number;
  target: PreferenceTarget;
  sigma?: number;
}

export interface RouteRequest {
  mode: "auto" | "semi";
  start_node: string;
  end_node: string;
  duration?: number;
  favorites?: string[];
  preferences: Preference[];
}
