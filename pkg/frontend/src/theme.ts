// Every color the views use lives here so the scales stay consistent
// and swappable (the red/green ramp is a known color-vision concern).

export const DIFFICULTY_COLORS: Record<string, string> = {
  easy: "#1668c4",
  intermediate: "#d62728",
  advanced: "#14141a",
  freeride: "#f28c1e",
  lift: "#8a8a94",
  helper: "#9aa7b5",
};

export const LIFT_ICONS: Record<string, string> = {
  "t-bar": "T",
  chair: "C",
  gondola: "G",
  cable_car: "K",
};

/** Piecewise-linear ramp stops for signed steepness in percent. */
const STEEPNESS_STOPS: [number, [number, number, number]][] = [
  [-20, [22, 128, 57]], // pronounced uphill: deep green
  [0, [121, 186, 86]], // flat
  [10, [253, 222, 88]], // gentle: yellow
  [25, [247, 166, 48]], // easy limit: orange
  [40, [214, 69, 35]], // intermediate limit: red
  [60, [122, 14, 14]], // very steep: dark red
];

function lerp(a: number, b: number, f: number): number {
  return a + (b - a) * f;
}

function rgb([r, g, b]: [number, number, number]): string {
  return `rgb(${Math.round(r)}, ${Math.round(g)}, ${Math.round(b)})`;
}

function ramp(stops: [number, [number, number, number]][], value: number): string {
  if (value <= stops[0][0]) return rgb(stops[0][1]);
  for (let i = 1; i < stops.length; i++) {
    const [hi, chi] = stops[i];
    if (value <= hi) {
      const [lo, clo] = stops[i - 1];
      const f = (value - lo) / (hi - lo);
      return rgb([lerp(clo[0], chi[0], f), lerp(clo[1], chi[1], f), lerp(clo[2], chi[2], f)]);
    }
  }
  return rgb(stops[stops.length - 1][1]);
}

export function steepnessColor(steepness: number | null): string {
  if (steepness === null) return "#c6c6c6";
  return ramp(STEEPNESS_STOPS, steepness);
}

/** Diverging blue-white-red scale for deviation from the declared band. */
const DISCREPANCY_STOPS: [number, [number, number, number]][] = [
  [-20, [33, 102, 172]],
  [0, [247, 247, 247]],
  [20, [178, 24, 43]],
];

export function discrepancyColor(delta: number | null): string {
  if (delta === null) return "#c6c6c6";
  return ramp(DISCREPANCY_STOPS, Math.max(-20, Math.min(20, delta)));
}

/** Width/opacity encoding of the preference score on the map. */
export function scoreWidth(sPref: number | null, base: number): number {
  if (sPref === null) return base;
  return base * (0.6 + 1.6 * sPref);
}

export function scoreOpacity(sPref: number | null): number {
  if (sPref === null) return 0.9;
  return 0.3 + 0.7 * sPref;
}
