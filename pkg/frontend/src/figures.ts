/** The four sweep figures: energy-efficiency envelopes, regime map,
 * SNR check, and alignment-event frequency.
 *
 * Figures only re-arrange table columns; no physics is recomputed here.
 */

import { writeFileSync } from "node:fs";
import { Chart, Point } from "./svg.js";
import { SchemaError, SweepRow } from "./schema.js";

function composeVertical(title: string, svgs: string[], width: number, height: number): string {
  const blocks = svgs.map((svg, i) => svg.replace("<svg ", `<svg y="${i * height}" `));
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height * svgs.length}">` +
    `<desc>${title}</desc>\n${blocks.join("\n")}\n</svg>`
  );
}

function groupBy<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const groups = new Map<string, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) bucket.push(row);
    else groups.set(k, [row]);
  }
  return groups;
}

/** Rate per unit energy vs relay count: analytic envelopes as curves,
 * measured operating points as markers, plus a companion panel with the
 * block-error-rate confidence intervals behind those measurements. */
export function plotBoundsVsK(rows: SweepRow[], outPath: string): void {
  const kValues = new Set(rows.map((r) => r.K));
  if (kValues.size < 2) {
    throw new SchemaError(
      `rate-vs-K figure needs at least 2 distinct K values, got ${kValues.size}`,
    );
  }
  const top = new Chart({
    title: "Bits per unit energy vs relay count",
    xLabel: "relays K",
    yLabel: "bits / energy",
    yLog: true,
  });
  const groups = groupBy(rows, (r) => `g=${r.g}, h=${r.h}`);
  for (const [label, group] of groups) {
    const sorted = [...group].sort((a, b) => a.K - b.K);
    top.addLine(
      `ceiling ${label}`,
      sorted.map((r) => ({ x: r.K, y: r.rpue_ub })),
      undefined,
      true,
    );
    top.addLine(
      `floor ${label}`,
      sorted.map((r) => ({ x: r.K, y: r.rpue_lb })),
    );
    top.addPoints(
      `measured ${label}`,
      sorted.map((r) => ({
        x: r.K,
        y: r.rpue_achieved,
        data: { "ci-lo": r.bler_ci_lo, "ci-hi": r.bler_ci_hi },
      })),
    );
  }
  const bottom = new Chart({
    title: "Block error rate with 95% confidence intervals",
    xLabel: "relays K",
    yLabel: "block error rate",
  });
  for (const [label, group] of groups) {
    const sorted = [...group].sort((a, b) => a.K - b.K);
    const pts: Point[] = sorted.map((r) => ({
      x: r.K,
      y: r.bler,
      data: { lo: r.bler_ci_lo, hi: r.bler_ci_hi },
    }));
    const color = undefined;
    bottom.addErrorBars(`bler CI ${label}`, pts, color);
    bottom.addPoints(`bler ${label}`, pts);
  }
  writeFileSync(outPath, composeVertical("bounds-vs-k", [top.render(), bottom.render()], 720, 480));
}

/** Operating points over the (g, h) plane with the regime boundaries
 * h = g/K and h = Kg for every relay count present. */
export function plotRegimeMap(rows: SweepRow[], outPath: string): void {
  if (rows.length === 0) throw new SchemaError("empty sweep table");
  const chart = new Chart({
    title: "Operating regimes over the gain plane",
    xLabel: "source-relay gain g",
    yLabel: "relay-destination gain h",
    xLog: true,
    yLog: true,
  });
  const gs = rows.map((r) => r.g);
  const hs = rows.map((r) => r.h);
  const gLo = Math.min(...gs) / 2;
  const gHi = Math.max(...gs) * 2;
  const span = { lo: Math.min(gLo, Math.min(...hs) / 2), hi: Math.max(gHi, Math.max(...hs) * 2) };
  for (const K of [...new Set(rows.map((r) => r.K))].sort((a, b) => a - b)) {
    chart.addLine(
      `h = g/K (K=${K})`,
      [{ x: span.lo, y: span.lo / K }, { x: span.hi, y: span.hi / K }],
      "#999",
      true,
    );
    chart.addLine(
      `h = Kg (K=${K})`,
      [{ x: span.lo, y: span.lo * K }, { x: span.hi, y: span.hi * K }],
      "#bbb",
      true,
    );
  }
  const byRegime = groupBy(rows, (r) => r.regime);
  for (const [regime, group] of byRegime) {
    chart.addPoints(
      regime,
      group.map((r) => ({ x: r.g, y: r.h, data: { regime: r.regime, K: r.K } })),
    );
  }
  writeFileSync(outPath, chart.render());
}

/** Measured SNR (mean, and worst aligned-event symbol) against the
 * analytic floor; the dashed identity line marks measured == floor. */
export function plotSnrCheck(rows: SweepRow[], outPath: string): void {
  if (rows.length === 0) throw new SchemaError("empty sweep table");
  const chart = new Chart({
    title: "Measured SNR vs analytic floor",
    xLabel: "snr floor",
    yLabel: "measured snr",
  });
  const floors = rows.map((r) => r.snr_lb).filter(Number.isFinite);
  const lo = Math.min(...floors, 0);
  const hi = Math.max(...floors) * 1.1;
  chart.addLine("measured = floor", [{ x: lo, y: lo }, { x: hi, y: hi }], "#999", true);
  chart.addPoints(
    "mean",
    rows.map((r) => ({ x: r.snr_lb, y: r.snr_measured_mean, data: { K: r.K, h: r.h } })),
  );
  chart.addPoints(
    "worst aligned symbol",
    rows.map((r) => ({ x: r.snr_lb, y: r.snr_measured_min_good, data: { K: r.K, h: r.h } })),
  );
  writeFileSync(outPath, chart.render());
}

/** Misalignment-event frequency against its union bound, row by row. */
export function plotAlignment(rows: SweepRow[], outPath: string): void {
  if (rows.length === 0) throw new SchemaError("empty sweep table");
  const chart = new Chart({
    title: "Channel misalignment frequency vs bound",
    xLabel: "sweep row",
    yLabel: "probability",
  });
  chart.addLine(
    "union bound",
    rows.map((r, i) => ({ x: i, y: r.e_idc_bound })),
    "#d62728",
    true,
  );
  chart.addPoints(
    "measured frequency",
    rows.map((r, i) => ({ x: i, y: r.e_idc_freq, data: { K: r.K, sigma2: r.sigma2 } })),
    "#1f77b4",
  );
  writeFileSync(outPath, chart.render());
}

export const FIGURES = {
  "bounds_vs_k.svg": plotBoundsVsK,
  "regime_map.svg": plotRegimeMap,
  "snr_check.svg": plotSnrCheck,
  "alignment.svg": plotAlignment,
} as const;
