import Papa from 'papaparse';
import { readFileSync } from 'fs';

export class SchemaError extends Error {}

export type Table = { columns: string[]; rows: Record<string, number>[] };

/** Documented CSV schemas of the simulation CLI, by figure kind. */
export const REQUIRED_COLUMNS: Record<string, string[]> = {
  dynamics: ['t_ps', 'occ_G', 'occ_X', 'occ_Y', 'occ_B', 'N_X', 'N_Y'],
  colormap: ['delta_b_mev', 'alpha1_pi'],
  sweep: ['g_mev', 'concurrence', 'n_pair_xx', 'n_pair_xy', 'n_pair_yx', 'n_pair_yy'],
};

export function readTable(path: string, kind: string): Table {
  const text = readFileSync(path, 'utf8');
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  const required = REQUIRED_COLUMNS[kind] ?? [];
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new SchemaError(
        `${path}: missing column '${col}' (have: ${columns.join(', ')})`,
      );
    }
  }
  const rows = parsed.data.map((raw, i) => {
    const row: Record<string, number> = {};
    for (const col of columns) {
      const v = Number(raw[col]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: row ${i + 1}, column '${col}' is not numeric`);
      }
      row[col] = v;
    }
    return row;
  });
  if (rows.length === 0) throw new SchemaError(`${path}: no data rows`);
  return { columns, rows };
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    // degenerate span: widen symmetrically so scales stay invertible
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}
