/**
 * Parsing and validation of the simulator's sweep tables.
 *
 * The simulator emits CSV with a fixed 12-column schema; every figure
 * consumes that schema and nothing else, so validation is strict and
 * failures name the first offending column.
 */

export const SWEEP_COLUMNS = [
  "delta",
  "theta",
  "flux",
  "T_fwd",
  "T_bwd",
  "L",
  "P1_L",
  "P2_L",
  "P12_L",
  "P1_R",
  "P2_R",
  "P12_R",
] as const;

export type SweepColumn = (typeof SWEEP_COLUMNS)[number];

export type SweepRow = Record<SweepColumn, number>;

export class SchemaError extends Error {}

/** Parse one sweep CSV document into typed rows. */
export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty file: no header row");
  }
  const header = lines[0].split(",");
  for (let i = 0; i < SWEEP_COLUMNS.length; i++) {
    if (header[i] !== SWEEP_COLUMNS[i]) {
      throw new SchemaError(
        `column ${i + 1} is ${JSON.stringify(header[i] ?? "")}, expected "${SWEEP_COLUMNS[i]}"`,
      );
    }
  }
  if (header.length !== SWEEP_COLUMNS.length) {
    throw new SchemaError(
      `unexpected extra column "${header[SWEEP_COLUMNS.length]}"`,
    );
  }

  const rows: SweepRow[] = [];
  for (let n = 1; n < lines.length; n++) {
    const fields = lines[n].split(",");
    if (fields.length !== SWEEP_COLUMNS.length) {
      throw new SchemaError(
        `row ${n} has ${fields.length} fields, expected ${SWEEP_COLUMNS.length}`,
      );
    }
    const row = {} as SweepRow;
    for (let i = 0; i < SWEEP_COLUMNS.length; i++) {
      const value = Number(fields[i]);
      if (fields[i].trim() === "" || (Number.isNaN(value) && fields[i].trim() !== "nan")) {
        throw new SchemaError(
          `row ${n}, column "${SWEEP_COLUMNS[i]}": not a number: ${JSON.stringify(fields[i])}`,
        );
      }
      row[SWEEP_COLUMNS[i]] = value;
    }
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new SchemaError("no data rows");
  }
  return rows;
}

/** Distinct sorted values of one column (NaN rows dropped). */
export function axisValues(rows: SweepRow[], column: SweepColumn): number[] {
  const values = new Set<number>();
  for (const row of rows) {
    if (Number.isFinite(row[column])) {
      values.add(row[column]);
    }
  }
  return [...values].sort((a, b) => a - b);
}
