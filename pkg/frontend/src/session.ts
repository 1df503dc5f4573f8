/** Tuning-session state: plant, per-zero cancellation degrees, gains,
 * horizon, and pinned run snapshots.  Pure data + transition functions so
 * the whole design loop is unit-testable without a DOM.
 */
import type { RunResult, ScenarioBody } from "./types.js";

export interface GainSettings {
  kp: number;
  ki: number;
  kd: number;
  lambda: number;
  mu: number;
}

export interface PinnedRun {
  label: string;
  nus: number[];
  gains: GainSettings;
  result: RunResult;
}

export interface SessionState {
  plantName: string;
  zeros: number[];
  nus: number[];
  gains: GainSettings;
  horizonS: number;
  nPoints: number;
  pinned: PinnedRun[];
}

export interface Preset {
  label: string;
  plantName: string;
  zeros: number[];
  nus: number[];
  gains: GainSettings;
  horizonS: number;
}

/** Parameter presets for the two benchmark studies (settings only; all
 * dynamics always come from the service). */
export const PRESETS: Record<string, Preset> = {
  "example1-deep": {
    label: "example1, deep cancellation",
    plantName: "example1",
    zeros: [8.2057],
    nus: [20],
    gains: { kp: 0.1, ki: 0, kd: 0.5, lambda: 1, mu: 1 },
    horizonS: 60,
  },
  "example1-low": {
    label: "example1, low-order cancellation",
    plantName: "example1",
    zeros: [8.2057],
    nus: [2],
    gains: { kp: 0.05, ki: 0, kd: 0.05, lambda: 1, mu: 1 },
    horizonS: 60,
  },
  "example2": {
    label: "example2, three zeros",
    plantName: "example2",
    zeros: [19.9982, 45.0015, 400.0282],
    nus: [5, 5, 5],
    gains: { kp: 5, ki: 0, kd: 2, lambda: 1, mu: 1 },
    horizonS: 10,
  },
};

export const DEFAULT_N_POINTS = 2000;

export function fromPreset(key: string, nPoints = DEFAULT_N_POINTS): SessionState {
  const preset = PRESETS[key];
  if (!preset) {
    throw new RangeError(`unknown preset '${key}'`);
  }
  return {
    plantName: preset.plantName,
    zeros: [...preset.zeros],
    nus: [...preset.nus],
    gains: { ...preset.gains },
    horizonS: preset.horizonS,
    nPoints,
    pinned: [],
  };
}

function assertNu(value: number): void {
  if (!Number.isInteger(value) || value < 1) {
    throw new RangeError(`cancellation degree must be an integer >= 1, got ${value}`);
  }
}

export function setNu(state: SessionState, index: number, value: number): SessionState {
  if (index < 0 || index >= state.nus.length) {
    throw new RangeError(`no zero at index ${index}`);
  }
  assertNu(value);
  const nus = [...state.nus];
  nus[index] = value;
  return { ...state, nus };
}

export function setAllNus(state: SessionState, value: number): SessionState {
  assertNu(value);
  return { ...state, nus: state.nus.map(() => value) };
}

export function setGain(
  state: SessionState,
  key: keyof GainSettings,
  value: number,
): SessionState {
  if (!Number.isFinite(value)) {
    throw new RangeError(`${key} must be finite`);
  }
  if ((key === "lambda" || key === "mu") && (value <= 0 || value > 2)) {
    throw new RangeError(`${key} must lie in (0, 2], got ${value}`);
  }
  return { ...state, gains: { ...state.gains, [key]: value } };
}

/** The exact request body the service expects for the current settings. */
export function scenarioBody(state: SessionState): ScenarioBody {
  return {
    plant: state.plantName,
    zeros: [...state.zeros],
    nu: [...state.nus],
    kp: state.gains.kp,
    ki: state.gains.ki,
    kd: state.gains.kd,
    lambda: state.gains.lambda,
    mu: state.gains.mu,
    horizon_s: state.horizonS,
    n_points: state.nPoints,
  };
}

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

/** Pin the given run; snapshots are immutable so later slider moves can
 * never rewrite a saved comparison curve. */
export function pinRun(
  state: SessionState,
  label: string,
  result: RunResult,
): SessionState {
  const snapshot: PinnedRun = deepFreeze({
    label,
    nus: [...state.nus],
    gains: { ...state.gains },
    result,
  });
  return { ...state, pinned: [...state.pinned, snapshot] };
}

export function unpinRun(state: SessionState, index: number): SessionState {
  return { ...state, pinned: state.pinned.filter((_, i) => i !== index) };
}

export function defaultPinLabel(state: SessionState): string {
  const nu = state.nus.every((n) => n === state.nus[0])
    ? String(state.nus[0])
    : state.nus.join(":");
  return `nu = ${nu}`;
}
