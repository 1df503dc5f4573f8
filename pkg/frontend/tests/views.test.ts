import { describe, expect, it } from "vitest";

import type { Margins, Metrics, RunResult, SweepRow } from "../src/types.js";
import {
  marginViews,
  metricsRows,
  nuLabel,
  overlayEnabled,
  sortRows,
  stabilityBadge,
  SWEEP_COLUMNS,
  sweepRowViews,
  UNDERSHOOT_WARN_FRAC,
} from "../src/views.js";
import fixture from "./fixtures/example1-nu20.json";

const captured = fixture.response as unknown as RunResult;

function metricsWith(overrides: Partial<Metrics>): Metrics {
  return { ...(captured.metrics as Metrics), ...overrides };
}

describe("metrics table", () => {
  it("styles undershoot below 2% as pass", () => {
    const rows = metricsRows(metricsWith({ undershoot_frac: 0.019 }));
    expect(rows.find((r) => r.key === "undershoot_frac")?.tone).toBe("pass");
  });

  it("flags undershoot at or above 2%", () => {
    for (const value of [UNDERSHOOT_WARN_FRAC, 0.21]) {
      const rows = metricsRows(metricsWith({ undershoot_frac: value }));
      expect(rows.find((r) => r.key === "undershoot_frac")?.tone).toBe("warn");
    }
  });

  it("formats the captured run for display", () => {
    const rows = metricsRows(captured.metrics);
    const byKey = Object.fromEntries(rows.map((r) => [r.key, r.text]));
    expect(byKey["undershoot_frac"]).toBe("0.85 %");
    expect(byKey["overshoot_frac"]).toBe("6.26 %");
    expect(byKey["rise_time_s"]).toBe("6.96 s");
    expect(byKey["settling_time_s"]).toBe("27.38 s");
    expect(byKey["effort_peak"]).toBe("0.279");
  });

  it("renders nothing for an unstable run's missing metrics", () => {
    expect(metricsRows(null)).toEqual([]);
  });

  it("shows a dash when peak effort is unavailable", () => {
    const rows = metricsRows(metricsWith({ effort_peak: null }));
    expect(rows.find((r) => r.key === "effort_peak")?.text).toBe("—");
  });
});

describe("cancellation-degree labels", () => {
  it("joins per-zero degrees with colons", () => {
    expect(nuLabel([4])).toBe("4");
    expect(nuLabel([4, 5, 6])).toBe("4:5:6");
  });
});

function sweepRow(
  nu: number,
  rise: number | null,
  opts: { stable?: boolean; pm?: number | null } = {},
): SweepRow {
  const stable = opts.stable ?? rise !== null;
  return {
    nu: [nu],
    stable,
    verdict: stable ? "stable" : "unstable",
    metrics:
      rise === null
        ? null
        : metricsWith({ rise_time_s: rise, undershoot_frac: 0.01 * nu }),
    margins: {
      gain_margin_db: stable ? 6 + nu : null,
      phase_margin_deg: opts.pm === undefined ? 40 + nu : opts.pm,
      omega_gain_crossover: stable ? 0.2 : null,
      omega_phase_crossover: stable ? 11.0 : null,
    },
  };
}

describe("sweep table", () => {
  const rows = [
    sweepRow(3, 0.9),
    sweepRow(1, null), // unstable at the lowest degree
    sweepRow(4, 1.4),
    sweepRow(2, 0.5),
  ];

  it("every column is sortable", () => {
    const views = sweepRowViews(rows);
    for (const col of SWEEP_COLUMNS) {
      const sorted = sortRows(views, col.key);
      expect(sorted).toHaveLength(rows.length);
      const finite = sorted
        .map((r) => r.sortValues[col.key])
        .filter((v) => !Number.isNaN(v));
      for (let i = 1; i < finite.length; i += 1) {
        expect(finite[i]).toBeGreaterThanOrEqual(finite[i - 1]);
      }
    }
  });

  it("sorts ascending and descending with undefined values always last", () => {
    const views = sweepRowViews(rows);
    const asc = sortRows(views, "rise_time_s", "asc");
    expect(asc.map((r) => r.nuText)).toEqual(["2", "3", "4", "1"]);
    const desc = sortRows(views, "rise_time_s", "desc");
    expect(desc.map((r) => r.nuText)).toEqual(["4", "3", "2", "1"]);
  });

  it("does not mutate the input order", () => {
    const views = sweepRowViews(rows);
    const before = views.map((r) => r.nuText);
    sortRows(views, "undershoot_frac", "desc");
    expect(views.map((r) => r.nuText)).toEqual(before);
  });

  it("marks unstable rows and labels their metric cells", () => {
    const views = sweepRowViews(rows);
    const unstable = views.find((r) => !r.stable);
    expect(unstable?.nuText).toBe("1");
    expect(unstable?.cells["rise_time_s"]).toBe("unstable");
    expect(unstable?.cells["gain_margin_db"]).toBe("unstable");
  });

  it("keeps per-zero degree labels in multi-zero sweeps", () => {
    const multi: SweepRow = { ...sweepRow(4, 1.0), nu: [4, 5, 6] };
    expect(sweepRowViews([multi])[0].nuText).toBe("4:5:6");
  });
});

describe("margin display", () => {
  it("formats finite margins with units", () => {
    const views = marginViews(captured.margins);
    expect(views.map((v) => v.label)).toEqual([
      "Gain margin",
      "Phase margin",
      "Gain crossover",
      "Phase crossover",
    ]);
    expect(views[0].text).toBe("9.39 dB");
    expect(views[1].text).toBe("70.26 °");
    expect(views[2].text).toBe("0.2173 rad/s");
  });

  it("shows infinite margins and absent crossovers distinctly", () => {
    const margins: Margins = {
      gain_margin_db: null,
      phase_margin_deg: 51.83,
      omega_gain_crossover: 0.786,
      omega_phase_crossover: null,
    };
    const views = marginViews(margins);
    expect(views[0].text).toBe("∞");
    expect(views[3].text).toBe("—");
  });

  it("renders nothing before the first run arrives", () => {
    expect(marginViews(null)).toEqual([]);
  });
});

describe("status presentation", () => {
  it("labels stable runs quietly and unstable runs loudly", () => {
    expect(stabilityBadge(true)).toEqual({ text: "stable", tone: "stable" });
    const bad = stabilityBadge(false);
    expect(bad.tone).toBe("unstable");
    expect(bad.text).toContain("UNSTABLE");
    expect(bad.text).toContain("shown"); // the curve stays on screen
  });

  it("overlay controls stay disabled until something is pinned", () => {
    expect(overlayEnabled(0)).toBe(false);
    expect(overlayEnabled(1)).toBe(true);
    expect(overlayEnabled(3)).toBe(true);
  });
});
