/** Dependency-free SVG line charts.
 *
 * Charts are built as markup strings from plain series data, so overlay
 * composition and legend/color assignment are unit-testable without a DOM;
 * the app shell injects the string via innerHTML.
 */

export interface Series {
  label: string;
  times: number[];
  values: number[];
}

export interface ChartOptions {
  width?: number;
  height?: number;
  title?: string;
  yLabel?: string;
  /** Dashed horizontal reference line (e.g. the step target 1.0). */
  reference?: number;
}

/** Color cycle for overlaid runs; adjacent entries stay distinguishable. */
export const PALETTE = [
  "#2563eb", // blue
  "#dc2626", // red
  "#16a34a", // green
  "#9333ea", // purple
  "#ea580c", // orange
  "#0891b2", // cyan
];

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export interface LegendEntry {
  label: string;
  color: string;
}

export function legendEntries(series: Series[]): LegendEntry[] {
  return series.map((s, i) => ({ label: s.label, color: seriesColor(i) }));
}

interface Extent {
  lo: number;
  hi: number;
}

function extent(valuesList: number[][], pad = 0): Extent {
  let lo = Infinity;
  let hi = -Infinity;
  for (const values of valuesList) {
    for (const v of values) {
      if (Number.isFinite(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const span = hi - lo;
  return { lo: lo - pad * span, hi: hi + pad * span };
}

/** Round tick positions covering [lo, hi] at a 1/2/5 step. */
export function ticks({ lo, hi }: Extent, target = 5): number[] {
  const raw = (hi - lo) / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= target) ?? 10 * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return String(parseFloat(v.toPrecision(4)));
}

const MARGIN = { top: 28, right: 16, bottom: 30, left: 52 };

/** Render overlaid series as a complete inline-SVG string. */
export function chartSvg(series: Series[], opts: ChartOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 300;
  const iw = width - MARGIN.left - MARGIN.right;
  const ih = height - MARGIN.top - MARGIN.bottom;

  const xs = extent(series.map((s) => s.times));
  const allY = series.map((s) => s.values);
  if (opts.reference !== undefined) allY.push([opts.reference]);
  const ys = extent(allY, 0.05);

  const mapX = (t: number): number =>
    MARGIN.left + ((t - xs.lo) / (xs.hi - xs.lo)) * iw;
  const mapY = (v: number): number =>
    MARGIN.top + ih - ((v - ys.lo) / (ys.hi - ys.lo)) * ih;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `class="chart" role="img">`,
  );
  if (opts.title) {
    parts.push(
      `<text x="${MARGIN.left}" y="16" class="chart-title">${escapeXml(opts.title)}</text>`,
    );
  }

  for (const tx of ticks(xs)) {
    const px = mapX(tx).toFixed(1);
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${MARGIN.top + ih}" class="grid"/>`,
      `<text x="${px}" y="${height - 10}" text-anchor="middle" class="tick">${fmt(tx)}</text>`,
    );
  }
  for (const ty of ticks(ys)) {
    const py = mapY(ty).toFixed(1);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + iw}" y2="${py}" class="grid"/>`,
      `<text x="${MARGIN.left - 6}" y="${py}" text-anchor="end" dominant-baseline="middle" class="tick">${fmt(ty)}</text>`,
    );
  }
  if (opts.reference !== undefined) {
    const py = mapY(opts.reference).toFixed(1);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + iw}" y2="${py}" class="reference"/>`,
    );
  }

  series.forEach((s, i) => {
    const pts = s.times
      .map((t, k) => [t, s.values[k]] as const)
      .filter(([t, v]) => Number.isFinite(t) && Number.isFinite(v))
      .map(([t, v]) => `${mapX(t).toFixed(1)},${mapY(v).toFixed(1)}`)
      .join(" ");
    parts.push(
      `<polyline fill="none" stroke="${seriesColor(i)}" stroke-width="1.8" ` +
        `data-label="${escapeXml(s.label)}" points="${pts}"/>`,
    );
  });

  parts.push("</svg>");
  return parts.join("");
}

/** Legend markup matching chartSvg's color assignment. */
export function legendHtml(series: Series[]): string {
  const items = legendEntries(series)
    .map(
      (e) =>
        `<span class="legend-item"><span class="legend-swatch" ` +
        `style="background:${e.color}"></span>${escapeXml(e.label)}</span>`,
    )
    .join("");
  return `<div class="legend">${items}</div>`;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
