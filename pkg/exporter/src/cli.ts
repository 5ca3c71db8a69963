#!/usr/bin/env node
/**
 * export --mode {full|stub} --source <fmt> --in <dir> --out <dir>
 *        [--dim N] [--seed S] [--tools config.json]
 */

import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { runExport } from "./export.js";
import { ExportError } from "./schema.js";

const USAGE =
  "usage: cdcrkit-export export --mode {full|stub} --source <fmt> --in <dir> --out <dir> [--dim N] [--seed S] [--tools config.json]";

export function main(argv: string[]): number {
  if (argv[0] !== "export") {
    console.error(USAGE);
    return 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: argv.slice(1),
      options: {
        mode: { type: "string" },
        source: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        dim: { type: "string", default: "64" },
        seed: { type: "string", default: "0" },
        tools: { type: "string" },
      },
    });
  } catch (e) {
    console.error((e as Error).message);
    console.error(USAGE);
    return 2;
  }
  const values = parsed.values;
  for (const required of ["mode", "source", "in", "out"] as const) {
    if (values[required] === undefined) {
      console.error(`missing --${required}`);
      console.error(USAGE);
      return 2;
    }
  }
  if (values.mode !== "full" && values.mode !== "stub") {
    console.error(`--mode must be full or stub, got ${values.mode}`);
    return 2;
  }
  const dim = Number(values.dim);
  const seed = Number(values.seed);
  if (!Number.isInteger(dim) || dim < 1 || !Number.isInteger(seed)) {
    console.error("--dim must be a positive integer and --seed an integer");
    return 2;
  }

  try {
    const result = runExport({
      mode: values.mode,
      source: values.source!,
      inDir: values.in!,
      outDir: values.out!,
      dim,
      seed,
      tools: values.tools,
    });
    console.log(`wrote ${result.corpusPath} (${result.documents} documents)`);
    console.log(`wrote ${result.storePath} (${result.vectors} vectors)`);
    return 0;
  } catch (e) {
    if (e instanceof ExportError) {
      console.error(`export failed: ${e.message}`);
      return 1;
    }
    throw e;
  }
}

if (process.argv[1] !== undefined && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
