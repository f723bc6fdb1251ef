/** Reader for the solver CLI's CSV outputs (header row, no quoting). */

import { readFileSync } from "fs";

export interface Table {
  header: string[];
  rows: string[][];
}

export class CsvError extends Error {}

/** Parse CSV text; every row must match the header width. */
export function parseTable(text: string): Table {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new CsvError("empty file, expected a header row");
  const header = lines[0].split(",");
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const row = lines[i].split(",");
    if (row.length !== header.length) {
      throw new CsvError(`line ${i + 1}: ${row.length} fields, header has ${header.length}`);
    }
    rows.push(row);
  }
  return { header, rows };
}

export function readTable(path: string): Table {
  return parseTable(readFileSync(path, "utf8"));
}

/**
 * Parse one numeric field. The writer spells non-finite values "inf",
 * "-inf", "nan" (Number() would turn those into NaN silently for inf).
 */
export function toNumber(field: string): number {
  if (field === "inf") return Infinity;
  if (field === "-inf") return -Infinity;
  if (field === "nan") return NaN;
  const v = Number(field);
  if (field.trim() === "" || Number.isNaN(v)) {
    throw new CsvError(`cannot parse ${JSON.stringify(field)} as a number`);
  }
  return v;
}

/** Index of a required column; CsvError names the missing column. */
export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`missing column ${JSON.stringify(name)}, header is [${table.header.join(", ")}]`);
  }
  return idx;
}

/** Distinct values of a column in first-appearance order. */
export function distinct(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  const seen = new Set<string>();
  const out: string[] = [];
  for (const row of table.rows) {
    if (!seen.has(row[idx])) {
      seen.add(row[idx]);
      out.push(row[idx]);
    }
  }
  return out;
}
