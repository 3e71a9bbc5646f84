/**
 * render(recipe) -> SVG file. All numbers come from the CSVs; this
 * module only scales and draws. Errors (missing file, missing column,
 * empty table) are raised before anything is written, so a failed
 * render leaves no output behind.
 */
import { writeFileSync } from "node:fs";

import { loadTable, numericColumn, PlotkitError } from "./csv.js";
import type {
  FigureRecipe,
  HeatmapFigureRecipe,
  LineFigureRecipe,
} from "./recipe.js";
import {
  colorbar,
  document as svgDocument,
  frame,
  heatmapCells,
  legend,
  linePath,
  plotArea,
  title,
  xAxis,
  yAxis,
  type HeatmapData,
  type LegendEntry,
  type PlotArea,
} from "./svg.js";

export { PlotkitError } from "./csv.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 20, top: 28, bottom: 52 };

function extent(values: number[], pad = 0.0): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const span = hi - lo;
  return [lo - pad * span, hi + pad * span];
}

function renderLines(recipe: LineFigureRecipe): string {
  const loaded = recipe.series.map((spec) => {
    const table = loadTable(spec.csv);
    return {
      spec,
      xs: numericColumn(table, spec.x),
      ys: numericColumn(table, spec.y),
    };
  });
  const xDomain =
    recipe.crop.x ?? extent(loaded.flatMap((s) => s.xs));
  const yDomain =
    recipe.crop.y ?? extent(loaded.flatMap((s) => s.ys), 0.06);
  const area = plotArea(
    xDomain,
    yDomain,
    MARGIN.left,
    MARGIN.top,
    WIDTH - MARGIN.left - MARGIN.right,
    HEIGHT - MARGIN.top - MARGIN.bottom,
  );
  const body: string[] = [frame(area), xAxis(area, recipe.xLabel), yAxis(area, recipe.yLabel)];
  if (yDomain[0] < 0 && yDomain[1] > 0) {
    const zero = area.y.at(0);
    body.push(
      `<line x1="${area.left}" y1="${zero}" x2="${area.right}" y2="${zero}" stroke="#aaa" stroke-width="0.8" stroke-dasharray="2 3"/>`,
    );
  }
  for (const { spec, xs, ys } of loaded) {
    body.push(linePath(area, xs, ys, spec.color, spec.style));
  }
  const entries: LegendEntry[] = recipe.series.map((spec) => ({
    label: spec.label,
    color: spec.color,
    style: spec.style,
  }));
  body.push(legend(area.left + 10, area.top + 8, entries));
  return svgDocument(WIDTH, HEIGHT, body.join("\n"));
}

function heatmapData(
  recipe: HeatmapFigureRecipe,
  csv: string,
): HeatmapData {
  const table = loadTable(csv);
  const xs = numericColumn(table, recipe.x);
  const ys = numericColumn(table, recipe.y);
  const zs = numericColumn(table, recipe.z);
  const uniqueX = [...new Set(xs)].sort((a, b) => a - b);
  const uniqueY = [...new Set(ys)].sort((a, b) => a - b);
  const xIndex = new Map(uniqueX.map((v, i) => [v, i]));
  const yIndex = new Map(uniqueY.map((v, i) => [v, i]));
  const z = new Map<string, number>();
  for (let row = 0; row < zs.length; row++) {
    z.set(`${xIndex.get(xs[row])}|${yIndex.get(ys[row])}`, zs[row]);
  }
  return { xs: uniqueX, ys: uniqueY, z };
}

function renderHeatmap(recipe: HeatmapFigureRecipe): string {
  const panels = recipe.panels.map((panel) => ({
    panel,
    data: heatmapData(recipe, panel.csv),
  }));
  // one symmetric color range across both panels, centered on zero
  let zMax = 0;
  for (const { data } of panels) {
    for (const value of data.z.values()) {
      zMax = Math.max(zMax, Math.abs(value));
    }
  }
  if (zMax === 0) zMax = 1;
  const zLo = -zMax;
  const zHi = zMax;

  const width = 1040;
  const height = 480;
  const panelW = 380;
  const panelH = height - MARGIN.top - MARGIN.bottom - 16;
  const gap = 56;
  const body: string[] = [];
  panels.forEach(({ panel, data }, index) => {
    const left = MARGIN.left + index * (panelW + gap);
    const xDomain = recipe.crop.x ?? extent(data.xs);
    const yDomain = recipe.crop.y ?? extent(data.ys);
    const area: PlotArea = plotArea(xDomain, yDomain, left, MARGIN.top + 16, panelW, panelH);
    body.push(heatmapCells(area, data, zLo, zHi));
    body.push(frame(area));
    body.push(xAxis(area, recipe.xLabel));
    if (index === 0) body.push(yAxis(area, recipe.yLabel));
    body.push(title(left + panelW / 2, MARGIN.top, panel.title));
  });
  body.push(
    colorbar(
      MARGIN.left + 2 * panelW + gap + 24,
      MARGIN.top + 16,
      panelH,
      zLo,
      zHi,
      recipe.zLabel,
    ),
  );
  return svgDocument(width, height, body.join("\n"));
}

export function render(recipe: FigureRecipe): string {
  const svg = recipe.kind === "lines" ? renderLines(recipe) : renderHeatmap(recipe);
  try {
    writeFileSync(recipe.out, svg, "utf8");
  } catch (err) {
    throw new PlotkitError(
      `cannot write ${recipe.out}: ${(err as Error).message}`,
    );
  }
  return recipe.out;
}
