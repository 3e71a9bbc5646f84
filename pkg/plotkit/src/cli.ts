/**
 * Shared entry point for the per-figure scripts and the render-all
 * driver. Usage: <script> [--data DIR] [--out DIR]. Exits 1 on any
 * recipe error (missing file, missing column, empty CSV) after
 * printing the reason.
 */
import { mkdirSync } from "node:fs";

import { RECIPES, type RecipeName } from "./figures.js";
import { render } from "./render.js";

function parseArgs(argv: string[]): { dataDir: string; outDir: string } {
  let dataDir = "data/golden";
  let outDir = "out";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--data" && argv[i + 1]) {
      dataDir = argv[++i];
    } else if (argv[i] === "--out" && argv[i + 1]) {
      outDir = argv[++i];
    } else {
      console.error(`unknown argument: ${argv[i]}`);
      process.exit(1);
    }
  }
  return { dataDir, outDir };
}

export function runFigures(names: RecipeName[], argv: string[]): void {
  const { dataDir, outDir } = parseArgs(argv);
  try {
    mkdirSync(outDir, { recursive: true });
    for (const name of names) {
      const written = render(RECIPES[name](dataDir, outDir));
      console.log(written);
    }
  } catch (err) {
    console.error(`plotkit: ${(err as Error).message}`);
    process.exit(1);
  }
}
