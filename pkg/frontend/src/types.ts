/** JSON shapes exchanged with the simulation service. */

export interface PlantInfo {
  name: string;
  num_coeffs: number[];
  den_coeffs: number[];
  known_nmp_zeros: number[];
}

export interface PlantsResponse {
  plants: PlantInfo[];
  version: string;
}

/** Request body for /api/simulate; field names match the service schema. */
export interface ScenarioBody {
  name?: string;
  plant: string | PlantInfo;
  zeros: number[];
  nu: number[];
  kp: number;
  ki?: number;
  kd?: number;
  lambda?: number;
  mu?: number;
  horizon_s: number;
  n_points: number;
  band_lo?: number;
  band_hi?: number;
}

export interface Metrics {
  undershoot_frac: number;
  overshoot_frac: number;
  rise_time_s: number;
  settling_time_s: number;
  ss_error: number;
  effort_peak: number | null;
}

/** Margin fields are null when the corresponding crossover does not exist. */
export interface Margins {
  gain_margin_db: number | null;
  phase_margin_deg: number | null;
  omega_gain_crossover: number | null;
  omega_phase_crossover: number | null;
}

export interface RunResult {
  scenario: Record<string, unknown>;
  times: number[];
  y: number[];
  u: number[];
  metrics: Metrics | null;
  margins: Margins;
  stable: boolean;
  verdict: string;
  version: string;
}

export type NuConfig = number | number[];

export interface SweepRow {
  nu: number[];
  stable: boolean;
  verdict: string;
  metrics: Metrics | null;
  margins: Margins;
}

export interface SweepResponse {
  rows: SweepRow[];
  version: string;
}

export interface LoopMargins {
  label: string;
  margins: Margins;
  stable: boolean;
  verdict: string;
}

export interface MarginsResponse {
  loops: LoopMargins[];
  version: string;
}

export interface ValidationBody {
  error: string;
  field: string;
  message: string;
}
