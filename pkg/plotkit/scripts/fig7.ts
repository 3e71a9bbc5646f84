import { runFigures } from "../src/cli.js";

runFigures(["fig7"], process.argv.slice(2));
