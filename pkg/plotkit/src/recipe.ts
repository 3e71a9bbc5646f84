/**
 * Figure recipes: everything a render needs, stated up front. Crop
 * bounds are part of the recipe so a cropped axis is a recorded
 * decision, not a side effect.
 */
import type { LineStyle } from "./svg.js";

export type FigureId = "fig4" | "fig5" | "fig6" | "fig7" | "fig8";

export interface SeriesSpec {
  csv: string;
  x: string;
  y: string;
  label: string;
  color: string;
  style: LineStyle;
}

export interface Crop {
  x?: [number, number];
  y?: [number, number];
}

export interface LineFigureRecipe {
  kind: "lines";
  id: Exclude<FigureId, "fig4">;
  series: SeriesSpec[];
  xLabel: string;
  yLabel: string;
  crop: Crop;
  out: string;
}

export interface HeatmapPanel {
  csv: string;
  title: string;
}

export interface HeatmapFigureRecipe {
  kind: "heatmap";
  id: "fig4";
  panels: [HeatmapPanel, HeatmapPanel];
  x: string;
  y: string;
  z: string;
  xLabel: string;
  yLabel: string;
  zLabel: string;
  crop: Crop;
  out: string;
}

export type FigureRecipe = LineFigureRecipe | HeatmapFigureRecipe;
