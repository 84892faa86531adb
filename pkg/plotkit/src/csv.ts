/** Minimal CSV table reader for the solver's snapshot and series files. */

import { readFileSync } from "node:fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length < 2) {
    throw new Error("CSV has no data rows");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `CSV row has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    rows.push(parts.map((p) => Number(p)));
  }
  return { columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf-8"));
}

/** Extract one column by name; the error names the missing column. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((r) => r[idx]);
}
