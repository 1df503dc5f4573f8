import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import {
  defaultPinLabel,
  fromPreset,
  pinRun,
  scenarioBody,
  setAllNus,
  setGain,
  setNu,
  unpinRun,
} from "../src/session.js";
import type { RunResult } from "../src/types.js";
import { metricsRows } from "../src/views.js";
import fixture from "./fixtures/example1-nu20.json";

const captured = fixture.response as unknown as RunResult;

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("deep-cancellation preset round-trip", () => {
  it("builds exactly the request body the captured service run used", () => {
    const state = fromPreset("example1-deep");
    expect(scenarioBody(state)).toEqual(fixture.request);
  });

  it("shows the service metrics verbatim, with undershoot styled pass", async () => {
    const fetchStub: FetchLike = async (url, init) => {
      expect(url).toBe("http://127.0.0.1:8780/api/simulate");
      expect(JSON.parse(String(init?.body))).toEqual(fixture.request);
      return jsonResponse(fixture.response);
    };
    const client = new ApiClient(undefined, fetchStub);

    const result = await client.simulate(scenarioBody(fromPreset("example1-deep")));

    // identical numbers straight through: the UI never recomputes dynamics
    expect(result.metrics).toEqual(captured.metrics);
    expect(result.margins).toEqual(captured.margins);
    expect(result.stable).toBe(true);

    const rows = metricsRows(result.metrics);
    const undershoot = rows.find((r) => r.key === "undershoot_frac");
    expect(undershoot?.text).toBe("0.85 %");
    expect(undershoot?.tone).toBe("pass");
  });
});

describe("presets", () => {
  it("example2 carries one cancellation degree per zero", () => {
    const state = fromPreset("example2");
    expect(state.zeros).toHaveLength(3);
    expect(state.nus).toEqual([5, 5, 5]);
    expect(state.gains).toEqual({ kp: 5, ki: 0, kd: 2, lambda: 1, mu: 1 });
  });

  it("rejects unknown preset keys", () => {
    expect(() => fromPreset("nope")).toThrow(RangeError);
  });
});

describe("cancellation-degree edits", () => {
  it("sets a single zero's degree", () => {
    const state = setNu(fromPreset("example2"), 1, 9);
    expect(state.nus).toEqual([5, 9, 5]);
  });

  it("sets all degrees at once", () => {
    const state = setAllNus(fromPreset("example2"), 4);
    expect(state.nus).toEqual([4, 4, 4]);
  });

  it.each([0, -3, 2.5, NaN])("rejects degree %p", (bad) => {
    const state = fromPreset("example1-deep");
    expect(() => setNu(state, 0, bad)).toThrow(RangeError);
    expect(() => setAllNus(state, bad)).toThrow(RangeError);
  });

  it("rejects out-of-range zero index", () => {
    expect(() => setNu(fromPreset("example1-deep"), 5, 3)).toThrow(RangeError);
  });

  it("degree 1 still produces a well-formed request (identity pre-compensator)", () => {
    const state = setAllNus(fromPreset("example1-deep"), 1);
    expect(scenarioBody(state).nu).toEqual([1]);
  });
});

describe("gain edits", () => {
  it("updates proportional gain", () => {
    const state = setGain(fromPreset("example1-deep"), "kp", 0.2);
    expect(state.gains.kp).toBe(0.2);
  });

  it.each([0, -0.5, 2.5])("rejects integral/derivative order %p", (bad) => {
    const state = fromPreset("example1-deep");
    expect(() => setGain(state, "lambda", bad)).toThrow(RangeError);
    expect(() => setGain(state, "mu", bad)).toThrow(RangeError);
  });

  it("rejects non-finite gains", () => {
    expect(() => setGain(fromPreset("example1-deep"), "kd", Infinity)).toThrow(
      RangeError,
    );
  });
});

describe("pinned runs", () => {
  it("snapshots are immutable once saved", () => {
    let state = fromPreset("example1-deep");
    state = pinRun(state, defaultPinLabel(state), structuredClone(captured));
    const pin = state.pinned[0];

    expect(() => {
      (pin.result.y as number[])[0] = 99;
    }).toThrow(TypeError);
    expect(() => {
      (pin as { label: string }).label = "rewritten";
    }).toThrow(TypeError);
    expect(pin.result.y[0]).toBe(captured.y[0]);
  });

  it("later slider moves do not touch existing pins", () => {
    let state = fromPreset("example1-deep");
    state = pinRun(state, defaultPinLabel(state), structuredClone(captured));
    state = setNu(state, 0, 2);
    state = setGain(state, "kp", 0.05);
    expect(state.pinned[0].nus).toEqual([20]);
    expect(state.pinned[0].gains.kp).toBe(0.1);
  });

  it("unpin removes exactly the requested snapshot", () => {
    let state = fromPreset("example1-deep");
    state = pinRun(state, "a", structuredClone(captured));
    state = pinRun(state, "b", structuredClone(captured));
    state = unpinRun(state, 0);
    expect(state.pinned.map((p) => p.label)).toEqual(["b"]);
  });

  it("default labels name the cancellation degree", () => {
    expect(defaultPinLabel(fromPreset("example1-deep"))).toBe("nu = 20");
    const mixed = setNu(fromPreset("example2"), 2, 6);
    expect(defaultPinLabel(setNu(mixed, 1, 5))).toBe("nu = 5:5:6");
  });
});
