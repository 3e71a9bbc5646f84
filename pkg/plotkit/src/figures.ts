/**
 * The five stock recipes. Each takes the directory of sweep CSVs and
 * an output directory, and states every styling and cropping decision
 * in the returned recipe object.
 */
import { join } from "node:path";

import type { FigureRecipe } from "./recipe.js";

const BLUE = "#1f63a8";
const RED = "#c23b22";
const GREEN = "#2a7f3f";
const BLACK = "#222222";

export function fig4(dataDir: string, outDir: string): FigureRecipe {
  return {
    kind: "heatmap",
    id: "fig4",
    panels: [
      { csv: join(dataDir, "fig4_coherent_grid.csv"), title: "coherent source (v_s = 1)" },
      { csv: join(dataDir, "fig4_thermal_grid.csv"), title: "thermal source (v_s = 3)" },
    ],
    x: "eta1",
    y: "eta2",
    z: "key_rate_k_prime",
    xLabel: "monitor transmittance eta1",
    yLabel: "tap transmittance eta2",
    zLabel: "pairwise key rate K' [bits/use]",
    crop: { x: [0.02, 0.98], y: [0.02, 0.98] },
    out: join(outDir, "fig4.svg"),
  };
}

export function fig5(dataDir: string, outDir: string): FigureRecipe {
  return {
    kind: "lines",
    id: "fig5",
    series: [
      { csv: join(dataDir, "fig5_ve1.csv"), x: "eta2", y: "key_rate_k",
        label: "vacuum input (v_e = 1)", color: BLACK, style: "solid" },
      { csv: join(dataDir, "fig5_ve2.csv"), x: "eta2", y: "key_rate_k",
        label: "coherent input (v_e = 2)", color: BLUE, style: "dash-dot" },
      { csv: join(dataDir, "fig5_ve5.csv"), x: "eta2", y: "key_rate_k",
        label: "thermal input (v_e = 5)", color: RED, style: "dashed" },
    ],
    xLabel: "tap transmittance eta2",
    yLabel: "key rate K [bits/use]",
    crop: { x: [0, 1] },
    out: join(outDir, "fig5.svg"),
  };
}

export function fig6(dataDir: string, outDir: string): FigureRecipe {
  return {
    kind: "lines",
    id: "fig6",
    series: [
      { csv: join(dataDir, "fig6_ve1.csv"), x: "eta2", y: "discord_b_given_a",
        label: "vacuum input (v_e = 1)", color: BLACK, style: "solid" },
      { csv: join(dataDir, "fig6_ve2.csv"), x: "eta2", y: "discord_b_given_a",
        label: "coherent input (v_e = 2)", color: BLUE, style: "dash-dot" },
    ],
    xLabel: "tap transmittance eta2",
    yLabel: "discord D(B|A)",
    crop: { x: [0, 1] },
    out: join(outDir, "fig6.svg"),
  };
}

export function fig7(dataDir: string, outDir: string): FigureRecipe {
  const low = join(dataDir, "fig7_eps0.01.csv");
  const high = join(dataDir, "fig7_eps1.csv");
  return {
    kind: "lines",
    id: "fig7",
    series: [
      { csv: low, x: "eta2", y: "i_ab",
        label: "I(A:B), eps = 0.01", color: BLUE, style: "solid" },
      { csv: high, x: "eta2", y: "i_ab",
        label: "I(A:B), eps = 1", color: BLUE, style: "dashed" },
      { csv: low, x: "eta2", y: "chi_be",
        label: "chi(B:E), eps = 0.01", color: RED, style: "solid" },
      { csv: high, x: "eta2", y: "chi_be",
        label: "chi(B:E), eps = 1", color: RED, style: "dashed" },
      { csv: low, x: "eta2", y: "chi_ae",
        label: "chi(A:E), eps = 0.01", color: GREEN, style: "solid" },
      { csv: high, x: "eta2", y: "chi_ae",
        label: "chi(A:E), eps = 1", color: GREEN, style: "dashed" },
    ],
    xLabel: "tap transmittance eta2",
    yLabel: "information [bits/use]",
    crop: { x: [0, 1] },
    out: join(outDir, "fig7.svg"),
  };
}

export function fig8(dataDir: string, outDir: string): FigureRecipe {
  const clean = join(dataDir, "fig8_n1.csv");
  const noisy = join(dataDir, "fig8_n5.csv");
  return {
    kind: "lines",
    id: "fig8",
    series: [
      { csv: clean, x: "eta2", y: "key_rate_k",
        label: "K, n = 1", color: GREEN, style: "solid" },
      { csv: noisy, x: "eta2", y: "key_rate_k",
        label: "K, n = 5", color: GREEN, style: "dashed" },
      { csv: clean, x: "eta2", y: "chi_be",
        label: "chi(B:E), n = 1", color: RED, style: "solid" },
      { csv: noisy, x: "eta2", y: "chi_be",
        label: "chi(B:E), n = 5", color: RED, style: "dashed" },
    ],
    xLabel: "tap transmittance eta2",
    yLabel: "information [bits/use]",
    crop: { x: [0, 1] },
    out: join(outDir, "fig8.svg"),
  };
}

export const RECIPES = { fig4, fig5, fig6, fig7, fig8 } as const;
export type RecipeName = keyof typeof RECIPES;
