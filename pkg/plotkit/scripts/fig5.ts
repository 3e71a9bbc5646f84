import { runFigures } from "../src/cli.js";

runFigures(["fig5"], process.argv.slice(2));
