// The four side panels: slope inspection, preferences with the best
// matches list, the route planner, and the route summary. All numbers
// shown come straight from API responses.

import { compassRose, donutSegments, plotPath, profileScale } from "./charts.js";
import type { MapView } from "./map.js";
import type { Store } from "./state.js";
import { DIFFICULTY_COLORS, steepnessColor } from "./theme.js";
import type { Preference, TooltipPayload } from "./types.js";

const STEEPNESS_RING_COLORS: Record<string, string> = {
  uphill: "#2e8b57",
  easy: "#fdde58",
  intermediate: "#f7a630",
  advanced: "#7a0e0e",
  unclassified: "#c6c6c6",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function fmtMinutes(seconds: number | null): string {
  if (seconds === null) return "n/a";
  return `${(seconds / 60).toFixed(0)} min`;
}

// ------------------------------------------------------------- tooltip

export class TooltipPanel {
  constructor(
    private root: HTMLElement,
    private store: Store,
  ) {}

  async show(edgeId: string): Promise<void> {
    const payload = await this.store.api.slope(edgeId);
    this.render(payload);
  }

  private render(p: TooltipPayload): void {
    this.root.replaceChildren();
    const head = el("div", "panel-head");
    head.appendChild(el("h3", "", p.name || p.id));
    const heart = el("button", "heart-toggle", this.store.favorites.has(p.id) ? "♥" : "♡");
    heart.title = "toggle favorite";
    heart.addEventListener("click", () => {
      const active = this.store.toggleFavorite(p.id);
      heart.textContent = active ? "♥" : "♡";
    });
    if (p.kind === "slope") head.appendChild(heart);
    this.root.appendChild(head);

    const rows: [string, string][] = [
      ["distance", `${p.length_m.toFixed(0)} m`],
      ["descent / ascent", `${p.descent_m.toFixed(0)} m / ${p.ascent_m.toFixed(0)} m`],
      ["steepness mean / max", `${p.mean_steepness?.toFixed(1) ?? "n/a"} % / ${p.max_steepness?.toFixed(1) ?? "n/a"} %`],
      ["median time", fmtMinutes(p.median_travel_time)],
    ];
    if (p.kind === "slope") {
      rows.push(["grooming", p.groomed ? "groomed" : "ungroomed"]);
      if (p.difficulty) rows.push(["declared", p.difficulty]);
    }
    if (p.kind === "lift" && p.amenities) {
      rows.push(["lift", p.lift_type ?? ""]);
      rows.push([
        "amenities",
        [
          p.amenities.heated_seats ? "heated seats" : null,
          p.amenities.bubble ? "bubble" : null,
          p.amenities.occupancy ? `${p.amenities.occupancy} seats` : null,
        ]
          .filter(Boolean)
          .join(", ") || "none",
      ]);
    }
    const table = el("dl", "facts");
    for (const [k, v] of rows) {
      table.appendChild(el("dt", "", k));
      table.appendChild(el("dd", "", v));
    }
    this.root.appendChild(table);
    this.root.appendChild(this.altitudePlot(p));
    this.root.appendChild(this.rose(p));
  }

  private altitudePlot(p: TooltipPayload): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 260 90");
    svg.setAttribute("class", "altitude-plot");
    const samples = p.altitude_profile.map((s) => ({
      cum_length: s.distance_m,
      altitude: s.altitude_m,
    }));
    const scale = profileScale(samples, 260, 90);
    // area strips colored by steepness under a difficulty-colored line
    scale.points.slice(0, -1).forEach((pt, i) => {
      const next = scale.points[i + 1];
      const strip = document.createElementNS("http://www.w3.org/2000/svg", "path");
      strip.setAttribute(
        "d",
        `M ${pt.x} ${pt.y} L ${next.x} ${next.y} L ${next.x} 86 L ${pt.x} 86 Z`,
      );
      strip.setAttribute("fill", steepnessColor(p.altitude_profile[i + 1]?.steepness_pct ?? null));
      strip.setAttribute("stroke", "none");
      svg.appendChild(strip);
    });
    const line = document.createElementNS("http://www.w3.org/2000/svg", "path");
    line.setAttribute("d", plotPath(scale.points));
    line.setAttribute("fill", "none");
    line.setAttribute("stroke-width", "2.5");
    line.setAttribute(
      "stroke",
      p.kind === "lift" ? DIFFICULTY_COLORS.lift : DIFFICULTY_COLORS[p.difficulty ?? "helper"],
    );
    svg.appendChild(line);
    return svg;
  }

  private rose(p: TooltipPayload): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 120 120");
    svg.setAttribute("class", "compass-rose");
    for (const needle of compassRose(p.compass_histogram, 60, 60, 48)) {
      const arc = document.createElementNS("http://www.w3.org/2000/svg", "path");
      arc.setAttribute("d", needle.arc);
      arc.setAttribute("fill", needle.fill);
      arc.setAttribute("stroke", "#777");
      arc.setAttribute("stroke-width", "0.4");
      svg.appendChild(arc);
      const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", "60");
      line.setAttribute("y1", "60");
      line.setAttribute("x2", String(needle.x));
      line.setAttribute("y2", String(needle.y));
      line.setAttribute("stroke", "#222");
      line.setAttribute("stroke-width", "2");
      svg.appendChild(line);
    }
    return svg;
  }
}

// ---------------------------------------------------------- preferences

const PRESETS: Record<string, Preference[]> = {
  easy: [
    { attribute: "steepness", weight: 1.0, target: 15, sigma: 10 },
    { attribute: "grooming", weight: 0.8, target: ["groomed"] },
    { attribute: "crowdedness", weight: 0.2, target: 0.3, sigma: 0.25 },
  ],
  intermediate: [
    { attribute: "steepness", weight: 1.0, target: 30, sigma: 10 },
    { attribute: "grooming", weight: 0.5, target: ["groomed"] },
  ],
  advanced: [
    { attribute: "steepness", weight: 1.0, target: 45, sigma: 10 },
    { attribute: "grooming", weight: 0.4, target: ["groomed"] },
  ],
  freeride: [
    { attribute: "steepness", weight: 0.8, target: 40, sigma: 10 },
    { attribute: "grooming", weight: 1.0, target: ["ungroomed"] },
    { attribute: "crowdedness", weight: 0.5, target: 0.0, sigma: 0.25 },
  ],
};

export class PreferencePanel {
  private list: HTMLElement;

  constructor(
    private root: HTMLElement,
    private store: Store,
    private names: Map<string, string>,
  ) {
    const presetRow = el("div", "preset-row");
    for (const name of Object.keys(PRESETS)) {
      const btn = el("button", "preset", name);
      btn.addEventListener("click", () => {
        this.store.setPreset(PRESETS[name].map((p) => ({ ...p })));
        void this.store.refreshRank();
        this.renderSliders();
      });
      presetRow.appendChild(btn);
    }
    root.appendChild(presetRow);
    this.sliders = el("div", "sliders");
    root.appendChild(this.sliders);
    this.list = el("ol", "best-matches");
    root.appendChild(el("h4", "", "best matches"));
    root.appendChild(this.list);
    this.renderSliders();
    store.on("rank", () => this.renderList());
    store.on("plan", () => this.renderList());
    store.on("favorites", () => this.renderList());
  }

  private sliders: HTMLElement;

  private renderSliders(): void {
    this.sliders.replaceChildren();
    for (const pref of this.store.preferences) {
      const row = el("div", "slider-row");
      row.appendChild(el("label", "", pref.attribute));
      const weight = el("input") as HTMLInputElement;
      weight.type = "range";
      weight.min = "0";
      weight.max = "1";
      weight.step = "0.05";
      weight.value = String(pref.weight);
      weight.title = "weight";
      weight.addEventListener("change", () => {
        this.store.setPreference(pref.attribute, { weight: Number(weight.value) });
        void this.store.refreshRank();
      });
      row.appendChild(weight);
      if (typeof pref.target === "number") {
        const target = el("input") as HTMLInputElement;
        target.type = "number";
        target.value = String(pref.target);
        target.title = "target value";
        target.addEventListener("change", () => {
          this.store.setPreference(pref.attribute, { target: Number(target.value) });
          void this.store.refreshRank();
        });
        row.appendChild(target);
      } else {
        const target = el("input") as HTMLInputElement;
        target.type = "text";
        target.value = (pref.target as string[]).join(",");
        target.title = "desired categories (comma separated)";
        target.addEventListener("change", () => {
          const values = target.value.split(",").map((v) => v.trim()).filter(Boolean);
          this.store.setPreference(pref.attribute, { target: values });
          void this.store.refreshRank();
        });
        row.appendChild(target);
      }
      this.sliders.appendChild(row);
    }
  }

  /** Rows keep the response order exactly; hearts mark slopes on the
   * current route. */
  private renderList(): void {
    this.list.replaceChildren();
    const onRoute = this.store.routeEdgeSet();
    for (const score of this.store.bestMatches) {
      const item = el("li", "match-row");
      const heart = this.store.favorites.has(score.edge_id) ? "♥ " : "";
      const routed = onRoute.has(score.edge_id) ? " ♥" : "";
      item.textContent = `${heart}${this.names.get(score.edge_id) ?? score.edge_id} ` +
        `(${score.s_pref.toFixed(3)})${routed}`;
      item.addEventListener("click", () => this.store.toggleFavorite(score.edge_id));
      this.list.appendChild(item);
    }
  }
}

// -------------------------------------------------------------- planner

export class PlannerPanel {
  private status: HTMLElement;
  private pickTarget: "start" | "end" | null = null;
  private startLabel: HTMLElement;
  private endLabel: HTMLElement;

  constructor(
    private root: HTMLElement,
    private store: Store,
    private map: MapView,
  ) {
    const pickRow = el("div", "pick-row");
    const startBtn = el("button", "", "pick start");
    this.startLabel = el("span", "node-label", "-");
    const endBtn = el("button", "", "pick end");
    this.endLabel = el("span", "node-label", "-");
    startBtn.addEventListener("click", () => (this.pickTarget = "start"));
    endBtn.addEventListener("click", () => (this.pickTarget = "end"));
    pickRow.append(startBtn, this.startLabel, endBtn, this.endLabel);
    root.appendChild(pickRow);

    const modeRow = el("div", "mode-row");
    const mode = el("select") as HTMLSelectElement;
    for (const value of ["semi", "auto"]) {
      const opt = el("option", "", value === "semi" ? "semi-automated (favorites)" : "automated (duration)");
      (opt as HTMLOptionElement).value = value;
      mode.appendChild(opt);
    }
    const duration = el("input") as HTMLInputElement;
    duration.type = "number";
    duration.value = "120";
    duration.title = "duration in minutes";
    const plan = el("button", "primary", "plan route");
    modeRow.append(mode, duration, plan);
    root.appendChild(modeRow);

    this.status = el("div", "planner-status");
    root.appendChild(this.status);

    map.onNodeClick = (nodeId) => {
      if (this.pickTarget === "start") {
        this.store.setEndpoints(nodeId, this.store.endNode);
        this.startLabel.textContent = nodeId;
      } else if (this.pickTarget === "end") {
        this.store.setEndpoints(this.store.startNode, nodeId);
        this.endLabel.textContent = nodeId;
      }
      this.pickTarget = null;
    };

    plan.addEventListener("click", async () => {
      const { startNode, endNode } = this.store;
      if (!startNode || !endNode) {
        this.status.textContent = "pick start and end nodes on the map first";
        return;
      }
      this.status.textContent = "planning...";
      try {
        if ((mode as HTMLSelectElement).value === "auto") {
          await this.store.planAuto(startNode, endNode, Number(duration.value) * 60);
        } else {
          await this.store.planSemi(startNode, endNode);
        }
        this.status.textContent = "";
      } catch (err) {
        this.status.textContent = `planning failed: ${(err as Error).message}`;
      }
    });

    store.on("plan", () => this.renderPlan());
  }

  private renderPlan(): void {
    const plan = this.store.plan;
    this.root.querySelector(".disclaimer")?.remove();
    if (!plan) return;
    this.map.highlightRoute(plan.route.edges);
    if (plan.freeride_disclaimer) {
      const banner = el(
        "div",
        "disclaimer",
        "Route contains freeride terrain. Check the avalanche situation before you go.",
      );
      this.root.appendChild(banner);
    }
  }
}

// -------------------------------------------------------------- summary

export class SummaryPanel {
  constructor(
    private root: HTMLElement,
    private store: Store,
    private map: MapView,
  ) {
    store.on("plan", () => this.render());
  }

  private render(): void {
    this.root.replaceChildren();
    const plan = this.store.plan;
    if (!plan) return;
    const s = plan.summary;
    const head = el("div", "summary-head");
    head.append(
      el("span", "stat", `${s.vertical_descent.toFixed(0)} m descent`),
      el("span", "stat", `${(s.total_length / 1000).toFixed(1)} km`),
      el("span", "stat", fmtMinutes(s.estimated_time)),
    );
    this.root.appendChild(head);
    this.root.appendChild(this.donut(s.difficulty_distribution, s.steepness_distribution));
    this.root.appendChild(this.profile(plan));
  }

  private donut(
    outer: Record<string, number>,
    inner: Record<string, number>,
  ): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 140 140");
    svg.setAttribute("class", "summary-donut");
    const rings = [
      donutSegments(outer, DIFFICULTY_COLORS, 70, 70, 62, 44),
      donutSegments(inner, STEEPNESS_RING_COLORS, 70, 70, 40, 24),
    ];
    for (const ring of rings) {
      for (const segment of ring) {
        const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
        path.setAttribute("d", segment.path);
        path.setAttribute("fill", segment.color);
        const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
        title.textContent = `${segment.key}: ${(segment.fraction * 100).toFixed(1)} %`;
        path.appendChild(title);
        svg.appendChild(path);
      }
    }
    return svg;
  }

  /** Altitude plot over the whole route; hovering moves a skier marker
   * to the matching map position. */
  private profile(plan: { summary: { profile: { cum_length: number; altitude: number | null; edge_id: string }[] } }): SVGSVGElement {
    const samples = plan.summary.profile;
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 320 110");
    svg.setAttribute("class", "route-profile");
    const scale = profileScale(samples, 320, 110);
    const line = document.createElementNS("http://www.w3.org/2000/svg", "path");
    line.setAttribute("d", plotPath(scale.points));
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", "#26547c");
    line.setAttribute("stroke-width", "2");
    svg.appendChild(line);
    svg.addEventListener("pointermove", (ev) => {
      const rect = svg.getBoundingClientRect();
      const x = ((ev.clientX - rect.left) / rect.width) * 320;
      const index = scale.indexAt(x);
      const sample = samples[index];
      if (!sample) return;
      const edgeStart = samples.findIndex((p) => p.edge_id === sample.edge_id);
      const edgeSamples = samples.filter((p) => p.edge_id === sample.edge_id);
      const fraction = edgeSamples.length > 1 ? (index - edgeStart) / (edgeSamples.length - 1) : 0.5;
      this.map.placeMarker(sample.edge_id, fraction);
    });
    svg.addEventListener("pointerleave", () => this.map.placeMarker(null));
    return svg;
  }
}
