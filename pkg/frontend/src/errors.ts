/** A required column is absent from an input CSV. */
export class ColumnError extends Error {
  readonly column: string;
  readonly file: string;

  constructor(column: string, file: string, available: readonly string[]) {
    super(
      `column '${column}' missing from ${file} ` +
      `(available: ${available.join(", ")})`,
    );
    this.name = "ColumnError";
    this.column = column;
    this.file = file;
  }
}

/** Anything else wrong with the inputs: empty glob, bad manifest, bad cell. */
export class InputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "InputError";
  }
}
