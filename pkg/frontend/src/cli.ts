#!/usr/bin/env node
/**
 * plot --in <dir> --preset <name> [--curves cc,eof,discord] --out <file>
 *
 * Reads the manifest written by `dotcavity simulate`, checks that it was
 * produced by the named preset and that the requested curves exist, and
 * renders the trajectory CSVs to a multi-panel SVG + PNG figure.
 */
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { ColumnError, InputError } from "./errors.js";
import { loadManifest } from "./manifest.js";
import { render } from "./render.js";

const USAGE =
  "usage: plot --in <dir> --preset <name> [--curves cc,eof,discord] --out <file>";

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        preset: { type: "string" },
        curves: { type: "string", default: "cc,eof,discord" },
        out: { type: "string" },
        help: { type: "boolean", short: "h", default: false },
      },
      allowPositionals: false,
    }));
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${USAGE}\n`);
    return 2;
  }
  if (values.help) {
    process.stdout.write(`${USAGE}\n`);
    return 0;
  }
  for (const key of ["in", "preset", "out"] as const) {
    if (values[key] === undefined) {
      process.stderr.write(`missing required option --${key}\n${USAGE}\n`);
      return 2;
    }
  }
  const dir = values.in!;
  const preset = values.preset!;
  const curves = values.curves!.split(",").map((c) => c.trim()).filter(Boolean);

  try {
    const manifest = loadManifest(dir);
    if (manifest.config.name !== preset) {
      throw new InputError(
        `manifest in '${dir}' was produced by '${manifest.config.name}', not '${preset}'`,
      );
    }
    for (const curve of curves) {
      if (!manifest.csv_columns.includes(curve)) {
        throw new ColumnError(curve, join(dir, "manifest.json"), manifest.csv_columns);
      }
    }
    for (const entry of manifest.outputs) {
      if (entry.status === "error") {
        process.stderr.write(`skipping ${entry.file}: ${entry.error ?? "failed"}\n`);
      }
    }
    const result = render({
      inputGlob: join(dir, `${preset}*.csv`),
      panelBy: manifest.config.sweep?.parameter ?? null,
      curves,
      output: values.out!,
    });
    process.stdout.write(
      `${result.svgPath}\n${result.pngPath}\n` +
      `${result.panelCount} panel(s) from ${result.inputs.length} file(s)\n`,
    );
    return 0;
  } catch (err) {
    if (err instanceof InputError || err instanceof ColumnError) {
      process.stderr.write(`${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  process.exit(main(process.argv.slice(2)));
}
