// Pure geometry for the summary donut, the altitude plots, and the
// compass rose. No DOM access here so the contract tests can run
// without a browser.

export interface DonutSegment {
  key: string;
  fraction: number;
  path: string;
  color: string;
}

function polar(cx: number, cy: number, r: number, angle: number): [number, number] {
  return [cx + r * Math.sin(angle), cy - r * Math.cos(angle)];
}

/**
 * Turn a distribution into donut ring segments.
 *
 * Fractions are taken from the response values (renormalized only to
 * absorb serialization rounding), starting at 12 o'clock and running
 * clockwise in key order.
 */
export function donutSegments(
  distribution: Record<string, number>,
  colors: Record<string, string>,
  cx: number,
  cy: number,
  rOuter: number,
  rInner: number,
): DonutSegment[] {
  const entries = Object.entries(distribution).filter(([, v]) => v > 0);
  const total = entries.reduce((acc, [, v]) => acc + v, 0);
  if (total <= 0) return [];
  const segments: DonutSegment[] = [];
  let angle = 0;
  for (const [key, value] of entries) {
    const fraction = value / total;
    const sweep = fraction * 2 * Math.PI;
    const end = angle + sweep;
    const large = sweep > Math.PI ? 1 : 0;
    const [x0, y0] = polar(cx, cy, rOuter, angle);
    const [x1, y1] = polar(cx, cy, rOuter, end);
    const [x2, y2] = polar(cx, cy, rInner, end);
    const [x3, y3] = polar(cx, cy, rInner, angle);
    const path =
      sweep >= 2 * Math.PI - 1e-9
        ? fullRing(cx, cy, rOuter, rInner)
        : `M ${x0} ${y0} A ${rOuter} ${rOuter} 0 ${large} 1 ${x1} ${y1} ` +
          `L ${x2} ${y2} A ${rInner} ${rInner} 0 ${large} 0 ${x3} ${y3} Z`;
    segments.push({ key, fraction, path, color: colors[key] ?? "#b5b5b5" });
    angle = end;
  }
  return segments;
}

function fullRing(cx: number, cy: number, rOuter: number, rInner: number): string {
  return (
    `M ${cx} ${cy - rOuter} A ${rOuter} ${rOuter} 0 1 1 ${cx - 0.01} ${cy - rOuter} Z ` +
    `M ${cx} ${cy - rInner} A ${rInner} ${rInner} 0 1 0 ${cx - 0.01} ${cy - rInner} Z`
  );
}

export interface PlotPoint {
  x: number;
  y: number;
}

export interface ProfileScale {
  points: PlotPoint[];
  xOf: (distance: number) => number;
  indexAt: (x: number) => number;
}

/** Scale (distance, altitude) samples into a width x height box. */
export function profileScale(
  samples: { cum_length: number; altitude: number | null }[],
  width: number,
  height: number,
  pad = 4,
): ProfileScale {
  const usable = samples.filter((s) => s.altitude !== null);
  if (usable.length === 0) {
    return { points: [], xOf: () => pad, indexAt: () => 0 };
  }
  const maxX = usable[usable.length - 1].cum_length || 1;
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of usable) {
    lo = Math.min(lo, s.altitude!);
    hi = Math.max(hi, s.altitude!);
  }
  if (hi - lo < 1) hi = lo + 1;
  const xOf = (d: number) => pad + (d / maxX) * (width - 2 * pad);
  const yOf = (a: number) => height - pad - ((a - lo) / (hi - lo)) * (height - 2 * pad);
  const points = usable.map((s) => ({ x: xOf(s.cum_length), y: yOf(s.altitude!) }));
  const indexAt = (x: number) => {
    let best = 0;
    let bestDist = Infinity;
    points.forEach((p, i) => {
      const d = Math.abs(p.x - x);
      if (d < bestDist) {
        bestDist = d;
        best = i;
      }
    });
    return best;
  };
  return { points, xOf, indexAt };
}

export function plotPath(points: PlotPoint[]): string {
  if (points.length === 0) return "";
  return points.map((p, i) => `${i === 0 ? "M" : "L"} ${p.x.toFixed(1)} ${p.y.toFixed(1)}`).join(" ");
}

export interface CompassNeedle {
  direction: string;
  fraction: number;
  x: number;
  y: number;
  arc: string;
  fill: string;
}

const COMPASS_ORDER = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"];

/** Needles and arcs of the 8-direction rose; lengths encode fractions. */
export function compassRose(
  histogram: Record<string, number>,
  cx: number,
  cy: number,
  radius: number,
): CompassNeedle[] {
  return COMPASS_ORDER.map((direction, i) => {
    const fraction = histogram[direction] ?? 0;
    const angle = (i * Math.PI) / 4;
    const [x, y] = polar(cx, cy, radius * fraction, angle);
    const a0 = angle - Math.PI / 8;
    const a1 = angle + Math.PI / 8;
    const [ax0, ay0] = polar(cx, cy, radius, a0);
    const [ax1, ay1] = polar(cx, cy, radius, a1);
    const grey = Math.round(235 - 195 * Math.min(1, fraction * 2));
    return {
      direction,
      fraction,
      x,
      y,
      arc: `M ${cx} ${cy} L ${ax0} ${ay0} A ${radius} ${radius} 0 0 1 ${ax1} ${ay1} Z`,
      fill: `rgb(${grey}, ${grey}, ${grey})`,
    };
  });
}
