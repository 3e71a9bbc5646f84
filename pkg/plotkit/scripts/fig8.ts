import { runFigures } from "../src/cli.js";

runFigures(["fig8"], process.argv.slice(2));
