/** Pure presentation models: raw service responses in, renderable rows out.
 *
 * Everything here is data-to-data so thresholds, sorting, and formatting
 * can be tested without a DOM.
 */

import type { Margins, Metrics, SweepRow } from "./types.js";

/** Undershoot at or above this fraction gets flagged in the metrics table. */
export const UNDERSHOOT_WARN_FRAC = 0.02;

export type CellTone = "pass" | "warn" | "plain";

export interface MetricRow {
  key: keyof Metrics;
  label: string;
  /** Display string, e.g. "1.13 %" or "6.96 s". */
  text: string;
  tone: CellTone;
}

function pct(frac: number): string {
  return `${(100 * frac).toFixed(2)} %`;
}

function secs(v: number | null): string {
  return v === null ? "—" : `${v.toFixed(2)} s`;
}

/** Metrics table rows; undershoot below the warn threshold is styled "pass". */
export function metricsRows(metrics: Metrics | null): MetricRow[] {
  if (metrics === null) return [];
  return [
    {
      key: "undershoot_frac",
      label: "Undershoot",
      text: pct(metrics.undershoot_frac),
      tone: metrics.undershoot_frac < UNDERSHOOT_WARN_FRAC ? "pass" : "warn",
    },
    {
      key: "overshoot_frac",
      label: "Overshoot",
      text: pct(metrics.overshoot_frac),
      tone: "plain",
    },
    {
      key: "rise_time_s",
      label: "Rise time (10–90 %)",
      text: secs(metrics.rise_time_s),
      tone: "plain",
    },
    {
      key: "settling_time_s",
      label: "Settling time (±2 %)",
      text: secs(metrics.settling_time_s),
      tone: "plain",
    },
    {
      key: "ss_error",
      label: "Steady-state error",
      text: pct(metrics.ss_error),
      tone: "plain",
    },
    {
      key: "effort_peak",
      label: "Peak control effort",
      text: metrics.effort_peak === null ? "—" : metrics.effort_peak.toFixed(3),
      tone: "plain",
    },
  ];
}

/** "4" for a single zero, "4:5:6" for one order per zero. */
export function nuLabel(nus: number[]): string {
  return nus.join(":");
}

export interface SweepColumn {
  key: SweepSortKey;
  label: string;
}

export type SweepSortKey =
  | "nu"
  | "undershoot_frac"
  | "overshoot_frac"
  | "rise_time_s"
  | "settling_time_s"
  | "effort_peak"
  | "phase_margin_deg"
  | "gain_margin_db";

export const SWEEP_COLUMNS: SweepColumn[] = [
  { key: "nu", label: "ν" },
  { key: "undershoot_frac", label: "Undershoot" },
  { key: "overshoot_frac", label: "Overshoot" },
  { key: "rise_time_s", label: "Rise (s)" },
  { key: "settling_time_s", label: "Settle (s)" },
  { key: "effort_peak", label: "Effort peak" },
  { key: "phase_margin_deg", label: "PM (°)" },
  { key: "gain_margin_db", label: "GM (dB)" },
];

export interface SweepRowView {
  nuText: string;
  stable: boolean;
  cells: Record<SweepSortKey, string>;
  /** Sort keys; unstable rows carry NaN for undefined metrics. */
  sortValues: Record<SweepSortKey, number>;
}

function sweepNumber(row: SweepRow, key: SweepSortKey): number {
  switch (key) {
    case "nu":
      return row.nu.length > 0 ? row.nu[0] : 0;
    case "phase_margin_deg":
      return row.margins.phase_margin_deg ?? NaN;
    case "gain_margin_db":
      return row.margins.gain_margin_db ?? NaN;
    default: {
      const m = row.metrics;
      if (m === null) return NaN;
      const v = m[key];
      return v === null ? NaN : v;
    }
  }
}

function sweepText(row: SweepRow, key: SweepSortKey): string {
  if (key === "nu") return nuLabel(row.nu);
  const v = sweepNumber(row, key);
  if (!Number.isFinite(v)) return row.stable ? "—" : "unstable";
  switch (key) {
    case "undershoot_frac":
    case "overshoot_frac":
      return pct(v);
    case "rise_time_s":
    case "settling_time_s":
      return v.toFixed(2);
    case "effort_peak":
      return v.toFixed(3);
    case "phase_margin_deg":
    case "gain_margin_db":
      return v.toFixed(1);
    default:
      return String(v);
  }
}

export function sweepRowViews(rows: SweepRow[]): SweepRowView[] {
  return rows.map((row) => {
    const cells = {} as Record<SweepSortKey, string>;
    const sortValues = {} as Record<SweepSortKey, number>;
    for (const col of SWEEP_COLUMNS) {
      cells[col.key] = sweepText(row, col.key);
      sortValues[col.key] = sweepNumber(row, col.key);
    }
    return { nuText: nuLabel(row.nu), stable: row.stable, cells, sortValues };
  });
}

/** Stable sort on any column; NaN (unstable/undefined) always sinks to the end. */
export function sortRows(
  rows: SweepRowView[],
  key: SweepSortKey,
  direction: "asc" | "desc" = "asc",
): SweepRowView[] {
  const sign = direction === "asc" ? 1 : -1;
  return rows
    .map((row, i) => ({ row, i }))
    .sort((a, b) => {
      const va = a.row.sortValues[key];
      const vb = b.row.sortValues[key];
      const na = Number.isNaN(va);
      const nb = Number.isNaN(vb);
      if (na && nb) return a.i - b.i;
      if (na) return 1;
      if (nb) return -1;
      if (va !== vb) return sign * (va - vb);
      return a.i - b.i;
    })
    .map((x) => x.row);
}

export interface MarginView {
  label: string;
  text: string;
}

function marginText(value: number | null, unit: string): string {
  return value === null ? "∞" : `${value.toFixed(2)} ${unit}`;
}

function crossoverText(value: number | null): string {
  return value === null ? "—" : `${value.toPrecision(4)} rad/s`;
}

export function marginViews(margins: Margins | null): MarginView[] {
  if (margins === null) return [];
  return [
    { label: "Gain margin", text: marginText(margins.gain_margin_db, "dB") },
    { label: "Phase margin", text: marginText(margins.phase_margin_deg, "°") },
    { label: "Gain crossover", text: crossoverText(margins.omega_gain_crossover) },
    { label: "Phase crossover", text: crossoverText(margins.omega_phase_crossover) },
  ];
}

export interface StabilityBadge {
  text: string;
  tone: "stable" | "unstable";
}

export function stabilityBadge(stable: boolean): StabilityBadge {
  return stable
    ? { text: "stable", tone: "stable" }
    : { text: "UNSTABLE — response shown for diagnosis", tone: "unstable" };
}

/** Overlay of pinned runs only makes sense once something is pinned. */
export function overlayEnabled(pinCount: number): boolean {
  return pinCount > 0;
}
