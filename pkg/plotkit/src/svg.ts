/**
 * Deterministic SVG primitives: scales, ticks, axes, line series,
 * heatmap cells. No timestamps, no randomness, fixed formatting, so a
 * re-render of the same data is byte-identical.
 */

export type LineStyle = "solid" | "dash-dot" | "dashed";

// line-style vocabulary; color choice is free
export const DASH: Record<LineStyle, string> = {
  solid: "",
  "dash-dot": "10 4 2 4",
  dashed: "7 5",
};

/** Stable short form: enough digits for ticks, no float noise. */
export function fmt(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    return value.toExponential(1).replace("e+", "e");
  }
  // up to 4 significant digits, trailing zeros trimmed
  return Number(value.toPrecision(4)).toString();
}

export function niceTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (!(span > 0) || !Number.isFinite(span)) return [lo];
  const raw = span / target;
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = power;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * power;
    if (step >= raw) break;
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    // snap to the step grid to avoid 0.30000000000000004 labels
    ticks.push(Number((Math.round(v / step) * step).toPrecision(12)));
  }
  return ticks;
}

export class LinearScale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly rangeLo: number,
    readonly rangeHi: number,
  ) {}

  at(value: number): number {
    const t = (value - this.lo) / (this.hi - this.lo);
    const px = this.rangeLo + t * (this.rangeHi - this.rangeLo);
    return Math.round(px * 100) / 100; // fixed 1/100 px grid
  }
}

export interface PlotArea {
  x: LinearScale;
  y: LinearScale;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export function plotArea(
  xDomain: [number, number],
  yDomain: [number, number],
  left: number,
  top: number,
  width: number,
  height: number,
): PlotArea {
  return {
    x: new LinearScale(xDomain[0], xDomain[1], left, left + width),
    y: new LinearScale(yDomain[0], yDomain[1], top + height, top), // y up
    left,
    right: left + width,
    top,
    bottom: top + height,
  };
}

const AXIS = 'stroke="#333" stroke-width="1"';
const TICK_TEXT = 'font-family="sans-serif" font-size="11" fill="#333"';
const LABEL_TEXT = 'font-family="sans-serif" font-size="13" fill="#111"';

export function frame(area: PlotArea): string {
  const { left, right, top, bottom } = area;
  const w = right - left;
  const h = bottom - top;
  return `<rect x="${left}" y="${top}" width="${w}" height="${h}" fill="none" ${AXIS}/>`;
}

export function xAxis(area: PlotArea, label: string): string {
  const parts: string[] = [];
  for (const tick of niceTicks(area.x.lo, area.x.hi)) {
    const px = area.x.at(tick);
    parts.push(`<line x1="${px}" y1="${area.bottom}" x2="${px}" y2="${area.bottom + 5}" ${AXIS}/>`);
    parts.push(`<text x="${px}" y="${area.bottom + 18}" text-anchor="middle" ${TICK_TEXT}>${fmt(tick)}</text>`);
  }
  const cx = (area.left + area.right) / 2;
  parts.push(`<text x="${cx}" y="${area.bottom + 36}" text-anchor="middle" ${LABEL_TEXT}>${escapeText(label)}</text>`);
  return parts.join("\n");
}

export function yAxis(area: PlotArea, label: string): string {
  const parts: string[] = [];
  for (const tick of niceTicks(area.y.lo, area.y.hi)) {
    const py = area.y.at(tick);
    parts.push(`<line x1="${area.left - 5}" y1="${py}" x2="${area.left}" y2="${py}" ${AXIS}/>`);
    parts.push(`<text x="${area.left - 8}" y="${py + 4}" text-anchor="end" ${TICK_TEXT}>${fmt(tick)}</text>`);
  }
  const cy = (area.top + area.bottom) / 2;
  const lx = area.left - 46;
  parts.push(
    `<text x="${lx}" y="${cy}" text-anchor="middle" ${LABEL_TEXT} transform="rotate(-90 ${lx} ${cy})">${escapeText(label)}</text>`,
  );
  return parts.join("\n");
}

/** Polyline clipped to the area's domain (drop out-of-crop points). */
export function linePath(
  area: PlotArea,
  xs: number[],
  ys: number[],
  color: string,
  style: LineStyle,
): string {
  const pieces: string[] = [];
  let pen = "M";
  for (let i = 0; i < xs.length; i++) {
    const inside =
      xs[i] >= area.x.lo && xs[i] <= area.x.hi &&
      ys[i] >= area.y.lo && ys[i] <= area.y.hi;
    if (!inside) {
      pen = "M";
      continue;
    }
    pieces.push(`${pen}${area.x.at(xs[i])},${area.y.at(ys[i])}`);
    pen = "L";
  }
  if (pieces.length === 0) return "";
  const dash = DASH[style] === "" ? "" : ` stroke-dasharray="${DASH[style]}"`;
  return `<path d="${pieces.join(" ")}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`;
}

export interface LegendEntry {
  label: string;
  color: string;
  style: LineStyle;
}

export function legend(x: number, y: number, entries: LegendEntry[]): string {
  const lineH = 18;
  const boxW = 10 + 34 + 6 + 26 * 8; // crude fixed width
  const parts: string[] = [
    `<rect x="${x}" y="${y}" width="${boxW}" height="${entries.length * lineH + 10}" fill="#ffffff" fill-opacity="0.85" stroke="#999" stroke-width="0.5"/>`,
  ];
  entries.forEach((entry, i) => {
    const cy = y + 5 + lineH * i + lineH / 2;
    const dash = DASH[entry.style] === "" ? "" : ` stroke-dasharray="${DASH[entry.style]}"`;
    parts.push(
      `<line x1="${x + 8}" y1="${cy}" x2="${x + 42}" y2="${cy}" stroke="${entry.color}" stroke-width="1.8"${dash}/>`,
    );
    parts.push(
      `<text x="${x + 48}" y="${cy + 4}" ${TICK_TEXT}>${escapeText(entry.label)}</text>`,
    );
  });
  return parts.join("\n");
}

export function title(x: number, y: number, text: string): string {
  return `<text x="${x}" y="${y}" text-anchor="middle" font-family="sans-serif" font-size="14" fill="#111">${escapeText(text)}</text>`;
}

// -------------------------------------------------------------- heatmaps

/** Diverging blue-white-red map on [-1, 1]; sign-aware for key rates. */
export function divergingColor(t: number): string {
  const clamped = Math.max(-1, Math.min(1, t));
  const lerp = (a: number, b: number, u: number) => Math.round(a + (b - a) * u);
  let r: number, g: number, b: number;
  if (clamped < 0) {
    const u = clamped + 1; // 0 at -1, 1 at 0
    [r, g, b] = [lerp(33, 247, u), lerp(102, 247, u), lerp(172, 247, u)];
  } else {
    const u = clamped;
    [r, g, b] = [lerp(247, 178, u), lerp(247, 24, u), lerp(247, 43, u)];
  }
  return `#${((1 << 24) + (r << 16) + (g << 8) + b).toString(16).slice(1)}`;
}

export interface HeatmapData {
  xs: number[]; // unique sorted
  ys: number[];
  z: Map<string, number>; // key `${xi}|${yi}` by index
}

export function heatmapCells(
  area: PlotArea,
  data: HeatmapData,
  zLo: number,
  zHi: number,
): string {
  const parts: string[] = [];
  const { xs, ys } = data;
  for (let i = 0; i < xs.length; i++) {
    for (let j = 0; j < ys.length; j++) {
      const value = data.z.get(`${i}|${j}`);
      if (value === undefined) continue;
      // cell edges at midpoints between grid nodes
      const x0 = area.x.at(i === 0 ? xs[0] : (xs[i - 1] + xs[i]) / 2);
      const x1 = area.x.at(i === xs.length - 1 ? xs[i] : (xs[i] + xs[i + 1]) / 2);
      const y0 = area.y.at(j === ys.length - 1 ? ys[j] : (ys[j] + ys[j + 1]) / 2);
      const y1 = area.y.at(j === 0 ? ys[0] : (ys[j - 1] + ys[j]) / 2);
      const t = zHi === zLo ? 0 : (2 * (value - zLo)) / (zHi - zLo) - 1;
      parts.push(
        `<rect x="${x0}" y="${y0}" width="${Math.round((x1 - x0) * 100) / 100}" height="${Math.round((y1 - y0) * 100) / 100}" fill="${divergingColor(t)}"/>`,
      );
    }
  }
  return parts.join("\n");
}

export function colorbar(
  x: number,
  top: number,
  height: number,
  zLo: number,
  zHi: number,
  label: string,
): string {
  const steps = 24;
  const parts: string[] = [];
  const stepH = height / steps;
  for (let k = 0; k < steps; k++) {
    const t = 1 - (2 * k) / (steps - 1); // +1 at top to -1 at bottom
    const y = Math.round((top + k * stepH) * 100) / 100;
    parts.push(
      `<rect x="${x}" y="${y}" width="14" height="${Math.round(stepH * 100) / 100 + 0.5}" fill="${divergingColor(t)}"/>`,
    );
  }
  parts.push(`<rect x="${x}" y="${top}" width="14" height="${height}" fill="none" ${AXIS}/>`);
  parts.push(`<text x="${x + 20}" y="${top + 8}" ${TICK_TEXT}>${fmt(zHi)}</text>`);
  parts.push(`<text x="${x + 20}" y="${top + height / 2 + 4}" ${TICK_TEXT}>${fmt((zLo + zHi) / 2)}</text>`);
  parts.push(`<text x="${x + 20}" y="${top + height}" ${TICK_TEXT}>${fmt(zLo)}</text>`);
  const cy = top + height / 2;
  const lx = x + 58;
  parts.push(
    `<text x="${lx}" y="${cy}" text-anchor="middle" ${LABEL_TEXT} transform="rotate(-90 ${lx} ${cy})">${escapeText(label)}</text>`,
  );
  return parts.join("\n");
}

export function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    "\n</svg>\n"
  );
}
