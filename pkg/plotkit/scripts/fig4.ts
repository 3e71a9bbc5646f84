import { runFigures } from "../src/cli.js";

runFigures(["fig4"], process.argv.slice(2));
