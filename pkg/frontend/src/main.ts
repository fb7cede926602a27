#!/usr/bin/env node
import { makeFigures } from "./figures.js";

function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: make_figures RESULTS_DIR OUT_DIR");
    return 2;
  }
  const [resultsDir, outDir] = argv;
  try {
    const written = makeFigures(resultsDir, outDir);
    for (const file of written) {
      console.log(file);
    }
    return 0;
  } catch (error) {
    console.error(`error: ${error instanceof Error ? error.message : error}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
