#!/usr/bin/env node
/**
 * Render simulator CSV exports to SVG figures.
 *
 * Usage:
 *   plot --kind comparison --in step.csv modelerr.csv disturb.csv effort.csv --out fig.svg
 *   plot --kind sweep      --in grid.csv    --out map.svg
 *   plot --kind mission    --in mission.csv --out timeline.svg
 */

import { readFileSync, writeFileSync } from "fs";

import { SchemaError, parseCsv } from "./csv";
import { render } from "./figures";

interface Args {
  kind: string;
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[]): Args {
  let kind = "";
  let out = "";
  const inputs: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i] ?? "";
    } else if (arg === "--out") {
      out = argv[++i] ?? "";
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else {
      throw new SchemaError(`unknown argument: ${arg}`);
    }
  }
  if (!kind || !out || inputs.length === 0) {
    throw new SchemaError(
      "usage: plot --kind {comparison,sweep,mission} --in <csv...> --out <img>",
    );
  }
  return { kind, inputs, out };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const tables = args.inputs.map((path) => parseCsv(readFileSync(path, "utf8")));
    writeFileSync(args.out, render(args.kind, tables), "utf8");
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
    } else {
      process.stderr.write(`error: ${String(err)}\n`);
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
