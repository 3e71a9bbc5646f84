/**
 * Loading for thermalqkd sweep CSVs.
 *
 * Files carry one `#` comment line, then a header row, then numeric
 * rows (the discord_quadrature column is the one string). The column
 * order is frozen upstream; we only require that the columns a recipe
 * asks for exist.
 */
import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class PlotkitError extends Error {}

export interface SweepTable {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function loadTable(path: string): SweepTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new PlotkitError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    comments: "#",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new PlotkitError(`${path}: ${first.message} (row ${first.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new PlotkitError(`${path}: no header row`);
  }
  if (parsed.data.length === 0) {
    throw new PlotkitError(`${path}: no data rows`);
  }
  return { path, columns, rows: parsed.data };
}

/** Numeric column, with the missing-column error naming the column. */
export function numericColumn(table: SweepTable, name: string): number[] {
  if (!table.columns.includes(name)) {
    throw new PlotkitError(
      `${table.path}: missing column "${name}" (have: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((row, index) => {
    const value = Number(row[name]);
    if (!Number.isFinite(value)) {
      throw new PlotkitError(
        `${table.path}: row ${index + 1}, column "${name}" is not numeric: ${row[name]}`,
      );
    }
    return value;
  });
}
