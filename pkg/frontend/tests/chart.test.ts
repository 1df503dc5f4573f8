import { describe, expect, it } from "vitest";

import {
  chartSvg,
  legendEntries,
  legendHtml,
  PALETTE,
  seriesColor,
  ticks,
  type Series,
} from "../src/chart.js";

function makeSeries(label: string, scale: number): Series {
  const times = Array.from({ length: 50 }, (_, i) => i * 0.2);
  return { label, times, values: times.map((t) => scale * (1 - Math.exp(-t))) };
}

function polylines(svg: string): Array<{ stroke: string; label: string; points: string }> {
  const out: Array<{ stroke: string; label: string; points: string }> = [];
  const re = /<polyline[^>]*stroke="([^"]+)"[^>]*data-label="([^"]+)"[^>]*points="([^"]*)"/g;
  for (let m = re.exec(svg); m !== null; m = re.exec(svg)) {
    out.push({ stroke: m[1], label: m[2], points: m[3] });
  }
  return out;
}

describe("pinned-run overlay rendering", () => {
  const three = [
    makeSeries("nu = 15", 0.9),
    makeSeries("nu = 20", 1.0),
    makeSeries("nu = 25", 1.1),
  ];

  it("three pinned runs produce three curves with pairwise distinct colors", () => {
    const svg = chartSvg(three);
    const curves = polylines(svg);
    expect(curves).toHaveLength(3);
    expect(new Set(curves.map((c) => c.stroke)).size).toBe(3);
  });

  it("legend maps each run label to the color actually drawn for it", () => {
    const svg = chartSvg(three);
    const curves = polylines(svg);
    const legend = legendEntries(three);
    expect(legend.map((e) => e.label)).toEqual(["nu = 15", "nu = 20", "nu = 25"]);
    for (const entry of legend) {
      const curve = curves.find((c) => c.label === entry.label);
      expect(curve?.stroke).toBe(entry.color);
    }

    const html = legendHtml(three);
    for (const entry of legend) {
      expect(html).toContain(entry.label);
      expect(html).toContain(`background:${entry.color}`);
    }
  });

  it("color assignment follows the palette and cycles", () => {
    expect(seriesColor(0)).toBe(PALETTE[0]);
    expect(seriesColor(PALETTE.length)).toBe(PALETTE[0]);
    expect(new Set(PALETTE).size).toBe(PALETTE.length);
  });

  it("identical data draws identical geometry regardless of label", () => {
    const ptsA = polylines(chartSvg([makeSeries("baseline", 1.0)]))[0].points;
    const ptsB = polylines(chartSvg([makeSeries("degree 1", 1.0)]))[0].points;
    expect(ptsB).toBe(ptsA);
  });
});

describe("chart scaffolding", () => {
  it("draws a dashed reference line when requested", () => {
    const svg = chartSvg([makeSeries("run", 1.0)], { reference: 1 });
    expect(svg).toContain('class="reference"');
  });

  it("skips non-finite samples instead of emitting invalid coordinates", () => {
    const s: Series = {
      label: "diverging",
      times: [0, 1, 2, 3],
      values: [0, 1, NaN, Infinity],
    };
    const svg = chartSvg([s]);
    expect(svg).not.toContain("NaN");
    expect(svg).not.toContain("Infinity");
    expect(polylines(svg)[0].points.split(" ")).toHaveLength(2);
  });

  it("escapes markup-significant characters in labels and titles", () => {
    const s: Series = { label: 'nu < 2 & "deep"', times: [0, 1], values: [0, 1] };
    const svg = chartSvg([s], { title: "<script>" });
    expect(svg).toContain("nu &lt; 2 &amp; &quot;deep&quot;");
    expect(svg).toContain("&lt;script&gt;");
    expect(svg).not.toContain("<script>");
  });

  it("keeps flat series renderable by padding the value range", () => {
    const flat: Series = { label: "constant", times: [0, 1, 2], values: [1, 1, 1] };
    const svg = chartSvg([flat]);
    expect(polylines(svg)[0].points.split(" ")).toHaveLength(3);
  });

  it("produces round tick positions covering the range", () => {
    expect(ticks({ lo: 0, hi: 60 })).toEqual([0, 20, 40, 60]);
    expect(ticks({ lo: 0, hi: 1 })).toEqual([0, 0.2, 0.4, 0.6000000000000001, 0.8, 1]);
  });
});
