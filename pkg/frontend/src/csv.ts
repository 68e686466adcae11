/**
 * Readers for the simulator's CSV outputs.
 *
 * Norm series schema (one file per path):
 *   t,norm_H,norm_V,norm_L4,wa_norm_H,wa_norm_L4,bound_H,bound_V
 * Convergence study schema: dt,error,order (order may be nan on the
 * first row).  Schema violations throw SchemaError naming the column.
 */

export const NORM_COLUMNS = [
  "t",
  "norm_H",
  "norm_V",
  "norm_L4",
  "wa_norm_H",
  "wa_norm_L4",
  "bound_H",
  "bound_V",
] as const;

export type NormColumn = (typeof NORM_COLUMNS)[number];
export type NormSeries = Record<NormColumn, number[]>;

export interface ConvergenceRow {
  dt: number;
  error: number;
  order: number;
}

export class SchemaError extends Error {}

function splitLines(text: string): string[] {
  return text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}

function parseNumber(raw: string, column: string, line: number, source: string): number {
  if (raw.toLowerCase() === "nan") return NaN;
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`${source}:${line}: column ${column}: cannot parse ${JSON.stringify(raw)}`);
  }
  return value;
}

export function parseNormCsv(text: string, source = "<csv>"): NormSeries {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty file`);
  }
  const header = lines[0].split(",");
  for (const column of NORM_COLUMNS) {
    if (!header.includes(column)) {
      throw new SchemaError(`${source}: missing column ${column}`);
    }
  }
  for (const name of header) {
    if (!NORM_COLUMNS.includes(name as NormColumn)) {
      throw new SchemaError(`${source}: unexpected column ${name}`);
    }
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const series = Object.fromEntries(NORM_COLUMNS.map((c) => [c, [] as number[]])) as NormSeries;
  lines.slice(1).forEach((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`${source}:${i + 2}: expected ${header.length} cells, got ${cells.length}`);
    }
    for (const column of NORM_COLUMNS) {
      series[column].push(parseNumber(cells[index.get(column)!], column, i + 2, source));
    }
  });
  if (series.t.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return series;
}

export function parseConvergenceCsv(text: string, source = "<csv>"): ConvergenceRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== "dt,error,order") {
    throw new SchemaError(`${source}: expected header dt,error,order`);
  }
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== 3) {
      throw new SchemaError(`${source}:${i + 2}: expected 3 cells, got ${cells.length}`);
    }
    return {
      dt: parseNumber(cells[0], "dt", i + 2, source),
      error: parseNumber(cells[1], "error", i + 2, source),
      order: parseNumber(cells[2], "order", i + 2, source),
    };
  });
  if (rows.length < 3) {
    throw new SchemaError(`${source}: need at least 3 refinement rows, got ${rows.length}`);
  }
  return rows;
}

/** Element-wise identical time grids, as required for ensemble statistics. */
export function assertSharedGrid(seriesList: NormSeries[], sources: string[]): void {
  const reference = seriesList[0].t;
  for (let s = 1; s < seriesList.length; s++) {
    const t = seriesList[s].t;
    if (t.length !== reference.length || t.some((x, i) => x !== reference[i])) {
      throw new SchemaError(`${sources[s]}: time grid differs from ${sources[0]}`);
    }
  }
}
