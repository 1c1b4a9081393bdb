/** Sweep-table schema: loading and strict validation of the harness CSV. */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Exact column set produced by the simulation harness. */
export const SWEEP_COLUMNS = [
  "K", "g", "h", "mu", "sigma2", "N", "Nprime", "M", "trials",
  "P1", "P2", "regime", "snr_lb", "snr_measured_mean",
  "snr_measured_min_good", "bler", "bler_ci_lo", "bler_ci_hi",
  "e_idc_freq", "e_idc_bound", "source_energy_mean", "relay_energy_mean",
  "rpue_achieved", "rpue_lb", "rpue_ub", "seed",
] as const;

export type SweepColumn = (typeof SWEEP_COLUMNS)[number];

const NUMERIC_COLUMNS = SWEEP_COLUMNS.filter((c) => c !== "regime");

export interface SweepRow {
  K: number;
  g: number;
  h: number;
  mu: number;
  sigma2: number;
  N: number;
  Nprime: number;
  M: number;
  trials: number;
  P1: number;
  P2: number;
  regime: string;
  snr_lb: number;
  snr_measured_mean: number;
  snr_measured_min_good: number;
  bler: number;
  bler_ci_lo: number;
  bler_ci_hi: number;
  e_idc_freq: number;
  e_idc_bound: number;
  source_energy_mean: number;
  relay_energy_mean: number;
  rpue_achieved: number;
  rpue_lb: number;
  rpue_ub: number;
  seed: number;
}

export class SchemaError extends Error {}

/** Parse and validate sweep CSV text; any missing column is a hard error. */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse failed: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of SWEEP_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`sweep CSV is missing required column ${column}`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("sweep CSV contains no data rows");
  }
  return parsed.data.map((raw, index) => {
    const row: Record<string, number | string> = { regime: raw.regime };
    for (const column of NUMERIC_COLUMNS) {
      const value = Number(raw[column]);
      if (raw[column] === "" || raw[column] === undefined) {
        row[column] = Number.NaN;
      } else if (Number.isNaN(value) && raw[column] !== "nan") {
        throw new SchemaError(
          `row ${index}: column ${column} is not numeric: ${raw[column]}`,
        );
      } else {
        row[column] = value;
      }
    }
    return row as unknown as SweepRow;
  });
}

export function loadSweepCsv(path: string): SweepRow[] {
  return parseSweepCsv(readFileSync(path, "utf8"));
}
