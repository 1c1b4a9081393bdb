/** Minimal dependency-free SVG chart builder.
 *
 * Every data-bound mark carries data-series / data-x / data-y attributes
 * holding the raw values it claims to render, so tests (and curious
 * readers) can check figures against their source table without parsing
 * pixel coordinates.
 */

export interface ChartOptions {
  width?: number;
  height?: number;
  margin?: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
}

export interface Point {
  x: number;
  y: number;
  /** optional extra data-* payload, e.g. confidence bounds */
  data?: Record<string, string | number>;
}

interface Series {
  kind: "line" | "points" | "bars";
  name: string;
  color: string;
  points: Point[];
  dashed?: boolean;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  const a = Math.abs(v);
  if (a !== 0 && (a < 1e-3 || a >= 1e4)) return v.toExponential(3);
  return String(Math.round(v * 1e6) / 1e6);
}

export class Chart {
  private series: Series[] = [];
  private opts: Required<ChartOptions>;
  private colorIndex = 0;

  constructor(opts: ChartOptions) {
    this.opts = {
      width: 720,
      height: 480,
      margin: 64,
      xLog: false,
      yLog: false,
      ...opts,
    };
  }

  private nextColor(): string {
    return PALETTE[this.colorIndex++ % PALETTE.length];
  }

  addLine(name: string, points: Point[], color?: string, dashed = false): this {
    this.series.push({ kind: "line", name, color: color ?? this.nextColor(), points, dashed });
    return this;
  }

  addPoints(name: string, points: Point[], color?: string): this {
    this.series.push({ kind: "points", name, color: color ?? this.nextColor(), points });
    return this;
  }

  /** Vertical bars from data.lo to data.hi at each point's x. */
  addErrorBars(name: string, points: Point[], color?: string): this {
    this.series.push({ kind: "bars", name, color: color ?? this.nextColor(), points });
    return this;
  }

  private extent(values: number[], log: boolean): [number, number] {
    const finite = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
    if (finite.length === 0) return log ? [0.1, 10] : [0, 1];
    let lo = Math.min(...finite);
    let hi = Math.max(...finite);
    if (lo === hi) {
      lo = log ? lo / 2 : lo - 1;
      hi = log ? hi * 2 : hi + 1;
    }
    if (!log) {
      const pad = 0.06 * (hi - lo);
      return [lo - pad, hi + pad];
    }
    return [lo / 1.3, hi * 1.3];
  }

  private ticks(lo: number, hi: number, log: boolean): number[] {
    if (log) {
      const result: number[] = [];
      for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * 1.0001; e++) {
        result.push(Math.pow(10, e));
      }
      return result.length >= 2 ? result : [lo, hi];
    }
    const span = hi - lo;
    const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
    const mult = span / step > 12 ? 5 : span / step > 6 ? 2 : 1;
    const result: number[] = [];
    for (let t = Math.ceil(lo / (step * mult)) * step * mult; t <= hi; t += step * mult) {
      result.push(Math.round(t * 1e9) / 1e9);
    }
    return result;
  }

  render(): string {
    const { width, height, margin, title, xLabel, yLabel, xLog, yLog } = this.opts;
    const xs = this.series.flatMap((s) => s.points.map((p) => p.x));
    const ys = this.series.flatMap((s) =>
      s.points.flatMap((p) => {
        const extra = [p.data?.lo, p.data?.hi]
          .map(Number)
          .filter((v) => Number.isFinite(v));
        return [p.y, ...extra];
      }),
    );
    const [x0, x1] = this.extent(xs, xLog);
    const [y0, y1] = this.extent(ys, yLog);
    const plotW = width - 2 * margin;
    const plotH = height - 2 * margin;
    const sx = (v: number) =>
      margin + plotW * ((xLog ? Math.log10(v) - Math.log10(x0) : v - x0) /
        (xLog ? Math.log10(x1) - Math.log10(x0) : x1 - x0));
    const sy = (v: number) =>
      height - margin - plotH * ((yLog ? Math.log10(v) - Math.log10(y0) : v - y0) /
        (yLog ? Math.log10(y1) - Math.log10(y0) : y1 - y0));

    const parts: string[] = [];
    parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
    );
    parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
    parts.push(`<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>`);

    // axes and ticks
    parts.push(`<g stroke="#444" fill="none">`);
    parts.push(`<path d="M${margin},${margin} L${margin},${height - margin} L${width - margin},${height - margin}"/>`);
    parts.push(`</g>`);
    for (const t of this.ticks(x0, x1, xLog)) {
      const px = sx(t);
      parts.push(`<line x1="${px}" y1="${height - margin}" x2="${px}" y2="${height - margin + 5}" stroke="#444"/>`);
      parts.push(`<text x="${px}" y="${height - margin + 18}" text-anchor="middle">${fmt(t)}</text>`);
    }
    for (const t of this.ticks(y0, y1, yLog)) {
      const py = sy(t);
      parts.push(`<line x1="${margin - 5}" y1="${py}" x2="${margin}" y2="${py}" stroke="#444"/>`);
      parts.push(`<text x="${margin - 8}" y="${py + 4}" text-anchor="end">${fmt(t)}</text>`);
    }
    parts.push(`<text x="${width / 2}" y="${height - 14}" text-anchor="middle">${esc(xLabel)}</text>`);
    parts.push(
      `<text x="18" y="${height / 2}" text-anchor="middle" transform="rotate(-90 18 ${height / 2})">${esc(yLabel)}</text>`,
    );

    // data
    for (const s of this.series) {
      const safe = s.points.filter(
        (p) => Number.isFinite(p.x) && Number.isFinite(p.y) && (!xLog || p.x > 0) && (!yLog || p.y > 0),
      );
      const dataAttrs = (p: Point) => {
        const extra = Object.entries(p.data ?? {})
          .map(([k, v]) => ` data-${k}="${esc(String(v))}"`)
          .join("");
        return `data-series="${esc(s.name)}" data-x="${p.x}" data-y="${p.y}"${extra}`;
      };
      if (s.kind === "line") {
        const d = safe.map((p, i) => `${i === 0 ? "M" : "L"}${sx(p.x)},${sy(p.y)}`).join(" ");
        parts.push(
          `<path d="${d}" fill="none" stroke="${s.color}" stroke-width="2"` +
          `${s.dashed ? ' stroke-dasharray="6 4"' : ""} data-series="${esc(s.name)}"/>`,
        );
        for (const p of safe) {
          parts.push(`<circle cx="${sx(p.x)}" cy="${sy(p.y)}" r="2.5" fill="${s.color}" ${dataAttrs(p)}/>`);
        }
      } else if (s.kind === "points") {
        for (const p of safe) {
          parts.push(`<circle cx="${sx(p.x)}" cy="${sy(p.y)}" r="4" fill="${s.color}" ${dataAttrs(p)}/>`);
        }
      } else {
        for (const p of safe) {
          const lo = Number(p.data?.lo);
          const hi = Number(p.data?.hi);
          if (!Number.isFinite(lo) || !Number.isFinite(hi)) continue;
          const px = sx(p.x);
          parts.push(
            `<g stroke="${s.color}" ${dataAttrs(p)}>` +
            `<line x1="${px}" y1="${sy(lo)}" x2="${px}" y2="${sy(hi)}"/>` +
            `<line x1="${px - 4}" y1="${sy(lo)}" x2="${px + 4}" y2="${sy(lo)}"/>` +
            `<line x1="${px - 4}" y1="${sy(hi)}" x2="${px + 4}" y2="${sy(hi)}"/>` +
            `</g>`,
          );
        }
      }
    }

    // legend
    let ly = margin + 6;
    for (const s of this.series) {
      parts.push(`<rect x="${width - margin - 150}" y="${ly - 9}" width="12" height="12" fill="${s.color}"/>`);
      parts.push(`<text x="${width - margin - 132}" y="${ly + 1}">${esc(s.name)}</text>`);
      ly += 18;
    }

    parts.push("</svg>");
    return parts.join("\n");
  }
}
