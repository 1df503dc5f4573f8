/** Browser entry point: wires the tuning controls to the simulation
 * service and renders runs, margins, pinned comparisons, and sweeps.
 * All logic lives in the imported modules; this file is DOM glue only.
 */
import { ApiClient, DEFAULT_BASE_URL, ValidationError } from "./api.js";
import { chartSvg, legendHtml, seriesColor, type Series } from "./chart.js";
import { RequestScheduler } from "./scheduler.js";
import {
  defaultPinLabel,
  fromPreset,
  pinRun,
  PRESETS,
  scenarioBody,
  setGain,
  setNu,
  unpinRun,
  type GainSettings,
  type SessionState,
} from "./session.js";
import type { PlantInfo, RunResult, ScenarioBody, SweepRow } from "./types.js";
import {
  marginViews,
  metricsRows,
  nuLabel,
  overlayEnabled,
  sortRows,
  stabilityBadge,
  SWEEP_COLUMNS,
  sweepRowViews,
  type SweepSortKey,
} from "./views.js";

const client = new ApiClient();

let state: SessionState = fromPreset("example1-deep");
let lastResult: RunResult | null = null;
let plants: PlantInfo[] = [];
let sweepRows: SweepRow[] = [];
let sweepSort: { key: SweepSortKey; direction: "asc" | "desc" } = {
  key: "nu",
  direction: "asc",
};

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

// ---------------------------------------------------------------- errors

function globalError(message: string): void {
  byId<HTMLElement>("global-error").textContent = message;
}

function fieldDomKey(path: string): string {
  return path.replace(/\[(\d+)\]/g, "-$1");
}

function showFieldError(path: string, message: string): void {
  const key = fieldDomKey(path);
  const span = document.getElementById(`err-${key}`);
  if (span) {
    span.textContent = message;
    document.getElementById(`ctl-${key}`)?.classList.add("invalid");
  } else {
    globalError(`${path}: ${message}`);
  }
}

function clearErrors(): void {
  globalError("");
  document.querySelectorAll(".field-error").forEach((n) => (n.textContent = ""));
  document.querySelectorAll(".invalid").forEach((n) => n.classList.remove("invalid"));
}

function showError(err: unknown): void {
  if (err instanceof ValidationError) {
    showFieldError(err.field, err.message);
    return;
  }
  globalError(err instanceof Error ? err.message : String(err));
}

// ------------------------------------------------------------- scheduler

const scheduler = new RequestScheduler<ScenarioBody, RunResult>({
  run: (body) => client.simulate(body),
  onResult: (result) => {
    lastResult = result;
    clearErrors();
    renderRun();
    void refreshBaselineTable();
  },
  onError: (err) => showError(err),
});

function requestRun(): void {
  scheduler.request(scenarioBody(state));
}

// ------------------------------------------------------------- rendering

function runSeries(): { y: Series[]; u: Series[] } {
  const y: Series[] = [];
  const u: Series[] = [];
  for (const pin of state.pinned) {
    y.push({ label: pin.label, times: pin.result.times, values: pin.result.y });
    u.push({ label: pin.label, times: pin.result.times, values: pin.result.u });
  }
  if (lastResult) {
    const nus = (lastResult.scenario["nu"] as number[] | undefined) ?? state.nus;
    const label = `current (ν = ${nuLabel(nus)})`;
    y.push({ label, times: lastResult.times, values: lastResult.y });
    u.push({ label, times: lastResult.times, values: lastResult.u });
  }
  return { y, u };
}

function renderRun(): void {
  const { y, u } = runSeries();
  byId<HTMLElement>("chart-y").innerHTML =
    y.length > 0 ? chartSvg(y, { title: "step response y(t)", reference: 1 }) : "";
  byId<HTMLElement>("legend-y").innerHTML = y.length > 0 ? legendHtml(y) : "";
  byId<HTMLElement>("chart-u").innerHTML =
    u.length > 0 ? chartSvg(u, { title: "control effort u(t)" }) : "";
  renderBadge();
  renderMetrics();
  renderMargins();
}

function renderBadge(): void {
  const host = byId<HTMLElement>("badge");
  if (!lastResult) {
    host.textContent = "";
    host.className = "badge";
    return;
  }
  const badge = stabilityBadge(lastResult.stable);
  host.textContent = badge.text;
  host.className = `badge badge-${badge.tone}`;
}

function renderMetrics(): void {
  const host = byId<HTMLElement>("metrics-table");
  const rows = metricsRows(lastResult ? lastResult.metrics : null);
  if (rows.length === 0) {
    host.innerHTML =
      lastResult && !lastResult.stable
        ? '<p class="note">step metrics are undefined for an unstable run</p>'
        : "";
    return;
  }
  const body = rows
    .map((r) => `<tr><th>${r.label}</th><td class="tone-${r.tone}">${r.text}</td></tr>`)
    .join("");
  host.innerHTML = `<table>${body}</table>`;
}

function renderMargins(): void {
  const host = byId<HTMLElement>("margins-table");
  const views = marginViews(lastResult ? lastResult.margins : null);
  host.innerHTML =
    views.length > 0
      ? `<table>${views
          .map((v) => `<tr><th>${v.label}</th><td>${v.text}</td></tr>`)
          .join("")}</table>`
      : "";
}

async function refreshBaselineTable(): Promise<void> {
  const host = byId<HTMLElement>("baseline-table");
  if (!byId<HTMLInputElement>("compare-baseline").checked) {
    host.innerHTML = "";
    return;
  }
  try {
    const resp = await client.margins(scenarioBody(state), true);
    const header =
      "<tr><th></th><th>Gain margin</th><th>Phase margin</th>" +
      "<th>Gain crossover</th><th>Phase crossover</th><th>verdict</th></tr>";
    const rows = resp.loops
      .map((loop) => {
        const cells = marginViews(loop.margins)
          .map((v) => `<td>${v.text}</td>`)
          .join("");
        return `<tr><th>${loop.label}</th>${cells}<td>${loop.verdict}</td></tr>`;
      })
      .join("");
    host.innerHTML = `<table>${header}${rows}</table>`;
  } catch (err) {
    showError(err);
  }
}

function renderPins(): void {
  const host = byId<HTMLElement>("pin-list");
  host.textContent = "";
  state.pinned.forEach((pin, i) => {
    const item = document.createElement("li");
    const swatch = document.createElement("span");
    swatch.className = "legend-swatch";
    swatch.style.background = seriesColor(i);
    const text = document.createElement("span");
    text.textContent = ` ${pin.label} (kp=${pin.gains.kp}, ki=${pin.gains.ki}, kd=${pin.gains.kd}) `;
    const remove = document.createElement("button");
    remove.type = "button";
    remove.textContent = "unpin";
    remove.addEventListener("click", () => {
      state = unpinRun(state, i);
      renderPins();
      renderRun();
    });
    item.append(swatch, text, remove);
    host.append(item);
  });
  byId<HTMLButtonElement>("clear-pins").disabled = !overlayEnabled(state.pinned.length);
}

function renderSweep(): void {
  const host = byId<HTMLElement>("sweep-table");
  if (sweepRows.length === 0) {
    host.innerHTML = "";
    return;
  }
  const views = sortRows(sweepRowViews(sweepRows), sweepSort.key, sweepSort.direction);
  const header = SWEEP_COLUMNS.map((c) => {
    const marker =
      c.key === sweepSort.key ? (sweepSort.direction === "asc" ? " ▲" : " ▼") : "";
    return `<th data-key="${c.key}" class="sortable">${c.label}${marker}</th>`;
  }).join("");
  const body = views
    .map((row) => {
      const cells = SWEEP_COLUMNS.map((c) => `<td>${row.cells[c.key]}</td>`).join("");
      return `<tr${row.stable ? "" : ' class="unstable-row"'}>${cells}</tr>`;
    })
    .join("");
  host.innerHTML = `<table><thead><tr>${header}</tr></thead><tbody>${body}</tbody></table>`;
  host.querySelectorAll("th.sortable").forEach((th) => {
    th.addEventListener("click", () => {
      const key = (th as HTMLElement).dataset["key"] as SweepSortKey;
      sweepSort =
        key === sweepSort.key
          ? { key, direction: sweepSort.direction === "asc" ? "desc" : "asc" }
          : { key, direction: "asc" };
      renderSweep();
    });
  });
}

// -------------------------------------------------------------- controls

function renderNuControls(): void {
  const host = byId<HTMLElement>("nu-controls");
  host.textContent = "";
  state.zeros.forEach((zero, i) => {
    const row = document.createElement("div");
    row.className = "control-row";
    const label = document.createElement("label");
    label.htmlFor = `ctl-nu-${i}`;
    label.textContent = `ν — zero at ${zero.toPrecision(5)} rad/s`;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "1";
    slider.max = "24";
    slider.step = "1";
    slider.id = `ctl-nu-${i}`;
    slider.value = String(state.nus[i]);
    const value = document.createElement("span");
    value.className = "nu-value";
    value.textContent = String(state.nus[i]);
    const err = document.createElement("span");
    err.className = "field-error";
    err.id = `err-nu-${i}`;
    slider.addEventListener("input", () => {
      try {
        state = setNu(state, i, Number(slider.value));
      } catch (e) {
        showError(e);
        return;
      }
      value.textContent = slider.value;
      requestRun();
    });
    row.append(label, slider, value, err);
    host.append(row);
  });
}

function bindGain(key: keyof GainSettings): void {
  const input = byId<HTMLInputElement>(`ctl-${key}`);
  input.addEventListener("input", () => {
    const value = Number(input.value);
    if (input.value === "" || !Number.isFinite(value)) return;
    try {
      state = setGain(state, key, value);
    } catch (e) {
      showFieldError(key, e instanceof Error ? e.message : String(e));
      return;
    }
    requestRun();
  });
}

function bindHorizon(): void {
  const input = byId<HTMLInputElement>("ctl-horizon_s");
  input.addEventListener("input", () => {
    const value = Number(input.value);
    if (input.value === "" || !Number.isFinite(value)) return;
    state = { ...state, horizonS: value };
    requestRun();
  });
}

function syncControls(): void {
  byId<HTMLSelectElement>("plant-select").value = state.plantName;
  for (const key of ["kp", "ki", "kd", "lambda", "mu"] as const) {
    byId<HTMLInputElement>(`ctl-${key}`).value = String(state.gains[key]);
  }
  byId<HTMLInputElement>("ctl-horizon_s").value = String(state.horizonS);
  renderNuControls();
}

async function runSweep(): Promise<void> {
  const maxNu = Number(byId<HTMLInputElement>("sweep-max").value) || 12;
  const nus = Array.from({ length: Math.max(1, Math.floor(maxNu)) }, (_, i) => i + 1);
  try {
    const resp = await client.sweep(scenarioBody(state), nus);
    sweepRows = resp.rows;
    renderSweep();
  } catch (err) {
    showError(err);
  }
}

// ------------------------------------------------------------------ init

async function init(): Promise<void> {
  const plantSelect = byId<HTMLSelectElement>("plant-select");
  plantSelect.addEventListener("change", () => {
    const info = plants.find((p) => p.name === plantSelect.value);
    if (!info) return;
    state = {
      ...state,
      plantName: info.name,
      zeros: [...info.known_nmp_zeros],
      nus: info.known_nmp_zeros.map((_, i) =>
        i < state.nus.length ? state.nus[i] : 4,
      ),
    };
    renderNuControls();
    requestRun();
  });

  const presetHost = byId<HTMLElement>("preset-buttons");
  for (const [key, preset] of Object.entries(PRESETS)) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = preset.label;
    btn.addEventListener("click", () => {
      state = { ...fromPreset(key), pinned: state.pinned };
      syncControls();
      requestRun();
    });
    presetHost.append(btn);
  }

  for (const key of ["kp", "ki", "kd", "lambda", "mu"] as const) {
    bindGain(key);
  }
  bindHorizon();

  byId<HTMLButtonElement>("pin-button").addEventListener("click", () => {
    if (!lastResult) return;
    state = pinRun(state, defaultPinLabel(state), lastResult);
    renderPins();
    renderRun();
  });
  byId<HTMLButtonElement>("clear-pins").addEventListener("click", () => {
    state = { ...state, pinned: [] };
    renderPins();
    renderRun();
  });
  byId<HTMLInputElement>("compare-baseline").addEventListener("change", () => {
    void refreshBaselineTable();
  });
  byId<HTMLButtonElement>("sweep-run").addEventListener("click", () => {
    void runSweep();
  });

  try {
    const resp = await client.plants();
    plants = resp.plants;
    plantSelect.textContent = "";
    for (const p of plants) {
      const opt = document.createElement("option");
      opt.value = p.name;
      opt.textContent = p.name;
      plantSelect.append(opt);
    }
  } catch {
    globalError(
      `cannot reach the simulation service at ${DEFAULT_BASE_URL} — ` +
        'start it with "fraccancel serve" and reload',
    );
    return;
  }

  syncControls();
  renderPins();
  requestRun();
}

void init();
