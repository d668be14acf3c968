import { readFileSync } from "node:fs";
import { join } from "node:path";

import { z } from "zod";

import { InputError } from "./errors.js";

const outputEntry = z.looseObject({
  file: z.string(),
  status: z.enum(["ok", "error"]),
  sweep_value: z.number().nullable().optional(),
  error: z.string().optional(),
});

const manifestSchema = z.looseObject({
  tool: z.looseObject({
    name: z.string(),
    version: z.string(),
    backend: z.string(),
  }),
  config: z.looseObject({
    name: z.string(),
    sweep: z
      .looseObject({ parameter: z.string(), values: z.array(z.number()) })
      .nullable()
      .optional(),
  }),
  csv_columns: z.array(z.string()),
  outputs: z.array(outputEntry),
});

export type Manifest = z.infer<typeof manifestSchema>;

/** Read and validate `<dir>/manifest.json`. */
export function loadManifest(dir: string): Manifest {
  const path = join(dir, "manifest.json");
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch {
    throw new InputError(`no manifest.json in '${dir}'; point --in at a simulation output directory`);
  }
  const result = manifestSchema.safeParse(JSON.parse(raw));
  if (!result.success) {
    const issue = result.error.issues[0];
    throw new InputError(
      `${path} is not a valid manifest: ${issue.path.join(".")}: ${issue.message}`,
    );
  }
  return result.data;
}
