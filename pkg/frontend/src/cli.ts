#!/usr/bin/env node
/** driftlink-plots <sweep.csv> --out <dir>
 *
 * Renders every figure from a harness sweep CSV as standalone SVG files.
 * Exit codes: 0 success, 1 schema or data error, 2 usage error.
 */

import { mkdirSync } from "node:fs";
import { join } from "node:path";
import { parseArgs } from "node:util";
import { FIGURES } from "./figures.js";
import { loadSweepCsv, SchemaError } from "./schema.js";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: { out: { type: "string", default: "." } },
    });
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }
  if (parsed.positionals.length !== 1) {
    console.error("usage: driftlink-plots <sweep.csv> --out <dir>");
    return 2;
  }
  const outDir = parsed.values.out ?? ".";
  try {
    const rows = loadSweepCsv(parsed.positionals[0]);
    mkdirSync(outDir, { recursive: true });
    for (const [name, render] of Object.entries(FIGURES)) {
      const path = join(outDir, name);
      render(rows, path);
      console.log(`wrote ${path}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

process.exitCode = main(process.argv.slice(2));
