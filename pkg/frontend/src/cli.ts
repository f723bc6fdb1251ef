#!/usr/bin/env node
/**
 * Batch figure renderer: `foragedp-figures --spec FILE [--spec FILE ...]`.
 * Exit codes: 0 rendered, 2 bad spec or CSV, 1 filesystem failure.
 */

import { CsvError } from "./csv.js";
import { writeFigure } from "./heatmap.js";
import { SpecError, loadSpec } from "./spec.js";

export function main(argv: string[]): number {
  const specPaths: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--spec" && i + 1 < argv.length) {
      specPaths.push(argv[++i]);
    } else {
      console.error(`usage: foragedp-figures --spec FILE [--spec FILE ...]`);
      return 2;
    }
  }
  if (specPaths.length === 0) {
    console.error(`usage: foragedp-figures --spec FILE [--spec FILE ...]`);
    return 2;
  }
  try {
    for (const path of specPaths) {
      console.log(writeFigure(loadSpec(path)));
    }
  } catch (err) {
    if (err instanceof SpecError || err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
