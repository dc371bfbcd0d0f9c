// SVG map view: double-line slopes (outer = declared difficulty, inner =
// per-piece steepness), dashed lifts with a type icon, node markers for
// route planning, and overlays for scores, routes, and the heatmap.

import { DIFFICULTY_COLORS, LIFT_ICONS, discrepancyColor, scoreOpacity, scoreWidth, steepnessColor } from "./theme.js";
import type { EdgeFeature, ResortGeoJson, SlopeScore } from "./types.js";

const BANDS: Record<string, [number, number]> = {
  easy: [0, 25],
  intermediate: [25, 40],
  advanced: [40, Infinity],
};

/** Deviation of a steepness value from its declared band (render-only). */
export function bandDelta(steepness: number | null, difficulty: string | null | undefined): number | null {
  if (steepness === null || !difficulty || !(difficulty in BANDS)) return null;
  const [lo, hi] = BANDS[difficulty];
  if (steepness > hi) return steepness - hi;
  if (steepness < lo) return steepness - lo;
  return 0;
}

export type ColorMode = "steepness" | "discrepancy";

interface Projected {
  feature: EdgeFeature;
  points: [number, number][];
}

export class MapView {
  private svg: SVGSVGElement;
  private world: SVGGElement;
  private edgeLayer: SVGGElement;
  private nodeLayer: SVGGElement;
  private markerLayer: SVGGElement;
  private heatLayer: SVGGElement;
  private edges = new Map<string, Projected>();
  private scores = new Map<string, number>();
  private routeEdges = new Set<string>();
  private colorMode: ColorMode = "steepness";
  private simpleMode = false;
  private scale = 1;
  private offsetX = 0;
  private offsetY = 0;
  private bounds = { west: 0, south: 0, east: 1, north: 1 };

  onEdgeClick: (edgeId: string) => void = () => {};
  onNodeClick: (nodeId: string) => void = () => {};

  constructor(private container: HTMLElement) {
    this.svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.setAttribute("class", "map-canvas");
    this.svg.setAttribute("viewBox", "0 0 1000 800");
    this.world = this.group("world");
    this.heatLayer = this.group("heat");
    this.edgeLayer = this.group("edges");
    this.nodeLayer = this.group("nodes");
    this.markerLayer = this.group("marker");
    this.world.append(this.heatLayer, this.edgeLayer, this.nodeLayer, this.markerLayer);
    this.svg.appendChild(this.world);
    container.appendChild(this.svg);
    this.wirePanZoom();
  }

  private group(name: string): SVGGElement {
    const g = document.createElementNS("http://www.w3.org/2000/svg", "g");
    g.dataset.layer = name;
    return g;
  }

  private project(lon: number, lat: number): [number, number] {
    const { west, south, east, north } = this.bounds;
    const x = ((lon - west) / (east - west || 1)) * 960 + 20;
    const y = ((north - lat) / (north - south || 1)) * 760 + 20;
    return [x, y];
  }

  render(resort: ResortGeoJson): void {
    const lons = resort.features.flatMap((f) => f.geometry.coordinates.map((c) => c[0]));
    const lats = resort.features.flatMap((f) => f.geometry.coordinates.map((c) => c[1]));
    this.bounds = {
      west: Math.min(...lons),
      east: Math.max(...lons),
      south: Math.min(...lats),
      north: Math.max(...lats),
    };
    this.edges.clear();
    this.edgeLayer.replaceChildren();
    this.nodeLayer.replaceChildren();

    for (const feature of resort.features) {
      const points = feature.geometry.coordinates.map(([lon, lat]) => this.project(lon, lat));
      this.edges.set(feature.properties.id, { feature, points });
      this.edgeLayer.appendChild(this.edgeGroup(feature, points));
    }
    for (const node of resort.nodes) {
      const [x, y] = this.project(node.lon, node.lat);
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", String(x));
      dot.setAttribute("cy", String(y));
      dot.setAttribute("r", "4");
      dot.setAttribute("class", "map-node");
      dot.addEventListener("click", (ev) => {
        ev.stopPropagation();
        this.onNodeClick(node.id);
      });
      const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
      title.textContent = node.id;
      dot.appendChild(title);
      this.nodeLayer.appendChild(dot);
    }
    this.restyle();
  }

  private edgeGroup(feature: EdgeFeature, points: [number, number][]): SVGGElement {
    const g = this.group(`edge-${feature.properties.id}`);
    g.classList.add("edge");
    g.dataset.edgeId = feature.properties.id;
    const path = pathOf(points);

    const outer = document.createElementNS("http://www.w3.org/2000/svg", "path");
    outer.setAttribute("d", path);
    outer.setAttribute("fill", "none");
    outer.classList.add("edge-outer");
    g.appendChild(outer);

    // the inner line is one sub-path per subsegment, colored separately
    const k = feature.properties.steepness.length;
    if (k > 0 && feature.properties.kind !== "lift") {
      const pieces = splitPolyline(points, k);
      pieces.forEach((piece, i) => {
        const inner = document.createElementNS("http://www.w3.org/2000/svg", "path");
        inner.setAttribute("d", pathOf(piece));
        inner.setAttribute("fill", "none");
        inner.classList.add("edge-inner");
        inner.dataset.segment = String(i);
        g.appendChild(inner);
      });
    }
    if (feature.properties.kind === "lift") {
      const [mx, my] = points[Math.floor(points.length / 2)];
      const icon = document.createElementNS("http://www.w3.org/2000/svg", "text");
      icon.setAttribute("x", String(mx));
      icon.setAttribute("y", String(my));
      icon.setAttribute("class", "lift-icon");
      icon.textContent = LIFT_ICONS[feature.properties.lift_type ?? "chair"] ?? "C";
      g.appendChild(icon);
    }
    g.addEventListener("click", (ev) => {
      ev.stopPropagation();
      this.onEdgeClick(feature.properties.id);
    });
    return g;
  }

  /** Preference scores drive width and opacity; empty map resets both. */
  applyScores(scores: SlopeScore[]): void {
    this.scores.clear();
    for (const s of scores) this.scores.set(s.edge_id, s.s_pref);
    this.restyle();
  }

  highlightRoute(edgeIds: Iterable<string>): void {
    this.routeEdges = new Set(edgeIds);
    this.restyle();
  }

  setColorMode(mode: ColorMode): void {
    this.colorMode = mode;
    this.restyle();
  }

  setSimpleMode(on: boolean): void {
    this.simpleMode = on;
    this.restyle();
  }

  setHeatmap(url: string | null): void {
    this.heatLayer.replaceChildren();
    if (!url) return;
    const [x0, y0] = this.project(this.bounds.west, this.bounds.north);
    const [x1, y1] = this.project(this.bounds.east, this.bounds.south);
    const image = document.createElementNS("http://www.w3.org/2000/svg", "image");
    image.setAttribute("href", url);
    image.setAttribute("x", String(x0));
    image.setAttribute("y", String(y0));
    image.setAttribute("width", String(x1 - x0));
    image.setAttribute("height", String(y1 - y0));
    image.setAttribute("opacity", "0.55");
    image.setAttribute("preserveAspectRatio", "none");
    this.heatLayer.appendChild(image);
  }

  /** Skier marker for the summary plot hover, at a fraction along an edge. */
  placeMarker(edgeId: string | null, fraction = 0.5): void {
    this.markerLayer.replaceChildren();
    if (!edgeId) return;
    const entry = this.edges.get(edgeId);
    if (!entry) return;
    const [x, y] = pointAlong(entry.points, Math.max(0, Math.min(1, fraction)));
    const marker = document.createElementNS("http://www.w3.org/2000/svg", "g");
    marker.setAttribute("class", "skier-marker");
    marker.innerHTML =
      `<circle cx="${x}" cy="${y}" r="9"></circle>` +
      `<text x="${x}" y="${y + 4}" text-anchor="middle">S</text>`;
    this.markerLayer.appendChild(marker);
  }

  private restyle(): void {
    const routeActive = this.routeEdges.size > 0;
    for (const [edgeId, { feature }] of this.edges) {
      const g = this.edgeLayer.querySelector<SVGGElement>(`[data-edge-id="${edgeId}"]`);
      if (!g) continue;
      const props = feature.properties;
      const sPref = this.scores.get(edgeId) ?? null;
      const onRoute = this.routeEdges.has(edgeId);
      let opacity = this.scores.size > 0 ? scoreOpacity(sPref) : 0.9;
      if (routeActive) opacity = onRoute ? 1.0 : 0.15;

      const outer = g.querySelector<SVGPathElement>(".edge-outer")!;
      const baseWidth = props.kind === "lift" ? 3 : 7;
      const width = this.scores.size > 0 && props.kind === "slope"
        ? scoreWidth(sPref, baseWidth)
        : baseWidth;
      const color = props.kind === "lift"
        ? DIFFICULTY_COLORS.lift
        : DIFFICULTY_COLORS[props.difficulty ?? "helper"] ?? DIFFICULTY_COLORS.helper;
      outer.setAttribute("stroke", color);
      outer.setAttribute("stroke-width", String(width));
      outer.setAttribute("opacity", String(opacity));
      outer.setAttribute(
        "stroke-dasharray",
        props.kind === "lift" ? "8 5" : props.groomed === false ? "2 5" : "",
      );

      g.querySelectorAll<SVGPathElement>(".edge-inner").forEach((inner, i) => {
        if (this.simpleMode) {
          inner.setAttribute("display", "none");
          return;
        }
        inner.removeAttribute("display");
        const steep = props.steepness[i] ?? null;
        const fill = this.colorMode === "steepness"
          ? steepnessColor(steep)
          : discrepancyColor(bandDelta(steep, props.difficulty));
        inner.setAttribute("stroke", fill);
        inner.setAttribute("stroke-width", String(Math.max(1.5, width * 0.45)));
        inner.setAttribute("opacity", String(opacity));
        inner.setAttribute("stroke-dasharray", props.groomed === false ? "2 5" : "");
      });
    }
  }

  private wirePanZoom(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.svg.addEventListener("pointerdown", (ev) => {
      dragging = true;
      lastX = ev.clientX;
      lastY = ev.clientY;
    });
    window.addEventListener("pointerup", () => (dragging = false));
    window.addEventListener("pointermove", (ev) => {
      if (!dragging) return;
      this.offsetX += ev.clientX - lastX;
      this.offsetY += ev.clientY - lastY;
      lastX = ev.clientX;
      lastY = ev.clientY;
      this.applyTransform();
    });
    this.svg.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
      this.scale = Math.max(0.4, Math.min(12, this.scale * factor));
      this.applyTransform();
    });
  }

  private applyTransform(): void {
    this.world.setAttribute(
      "transform",
      `translate(${this.offsetX} ${this.offsetY}) scale(${this.scale})`,
    );
  }
}

function pathOf(points: [number, number][]): string {
  return points.map((p, i) => `${i === 0 ? "M" : "L"} ${p[0].toFixed(1)} ${p[1].toFixed(1)}`).join(" ");
}

/** Split a polyline into n equal-arc pieces (render geometry only). */
export function splitPolyline(points: [number, number][], n: number): [number, number][][] {
  const cum = [0];
  for (let i = 1; i < points.length; i++) {
    cum.push(cum[i - 1] + Math.hypot(points[i][0] - points[i - 1][0], points[i][1] - points[i - 1][1]));
  }
  const total = cum[cum.length - 1] || 1;
  const pieces: [number, number][][] = [];
  for (let k = 0; k < n; k++) {
    const s0 = (k / n) * total;
    const s1 = ((k + 1) / n) * total;
    const piece: [number, number][] = [pointAt(points, cum, s0)];
    for (let i = 0; i < points.length; i++) {
      if (cum[i] > s0 && cum[i] < s1) piece.push(points[i]);
    }
    piece.push(pointAt(points, cum, s1));
    pieces.push(piece);
  }
  return pieces;
}

function pointAt(points: [number, number][], cum: number[], s: number): [number, number] {
  if (s <= 0) return points[0];
  if (s >= cum[cum.length - 1]) return points[points.length - 1];
  let i = 0;
  while (cum[i + 1] < s) i++;
  const span = cum[i + 1] - cum[i] || 1;
  const f = (s - cum[i]) / span;
  return [
    points[i][0] + (points[i + 1][0] - points[i][0]) * f,
    points[i][1] + (points[i + 1][1] - points[i][1]) * f,
  ];
}

function pointAlong(points: [number, number][], fraction: number): [number, number] {
  const cum = [0];
  for (let i = 1; i < points.length; i++) {
    cum.push(cum[i - 1] + Math.hypot(points[i][0] - points[i - 1][0], points[i][1] - points[i - 1][1]));
  }
  return pointAt(points, cum, fraction * (cum[cum.length - 1] || 1));
}
