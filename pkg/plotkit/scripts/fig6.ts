import { runFigures } from "../src/cli.js";

runFigures(["fig6"], process.argv.slice(2));
