import { readFileSync } from "node:fs";
import { basename } from "node:path";

import { csvParse } from "d3";

import { ColumnError, InputError } from "./errors.js";

/** One trajectory CSV, parsed and validated against the requested curves. */
export interface Trajectory {
  file: string;
  columns: string[];
  t: number[];
  /** column name -> values, for every requested curve */
  series: Map<string, number[]>;
}

const TIME_COLUMN = "t_ps";

/**
 * Read a trajectory CSV and pull out the time axis plus the requested
 * curve columns. Raises ColumnError naming the first missing column and
 * InputError for non-numeric cells.
 */
export function readTrajectory(file: string, curves: readonly string[]): Trajectory {
  const rows = csvParse(readFileSync(file, "utf8"));
  const columns = [...rows.columns];
  const name = basename(file);

  for (const column of [TIME_COLUMN, ...curves]) {
    if (!columns.includes(column)) {
      throw new ColumnError(column, name, columns);
    }
  }
  if (rows.length === 0) {
    throw new InputError(`${name} contains no data rows`);
  }

  const parse = (column: string): number[] =>
    rows.map((row, i) => {
      const value = Number(row[column]);
      if (!Number.isFinite(value)) {
        throw new InputError(
          `${name} row ${i + 1}: column '${column}' is not a finite number ` +
          `(got ${JSON.stringify(row[column])})`,
        );
      }
      return value;
    });

  const series = new Map(curves.map((c) => [c, parse(c)]));
  return { file, columns, t: parse(TIME_COLUMN), series };
}
