import { runFigures } from "../src/cli.js";

runFigures(["fig4", "fig5", "fig6", "fig7", "fig8"], process.argv.slice(2));
