/** Thin typed client for the simulation service.
 *
 * Every number shown in the UI comes from these calls; the UI itself never
 * computes dynamics.  A 422 (computed-but-unstable) still carries the full
 * run payload and is returned normally; a 400 carries the offending field
 * path and is thrown as ValidationError so callers can attach it to the
 * matching control.
 */
import type {
  MarginsResponse,
  NuConfig,
  PlantsResponse,
  RunResult,
  ScenarioBody,
  SweepResponse,
  ValidationBody,
} from "./types.js";

export class ValidationError extends Error {
  readonly field: string;

  constructor(body: ValidationBody) {
    super(body.message);
    this.name = "ValidationError";
    this.field = body.field;
  }
}

export class ServiceError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export const DEFAULT_BASE_URL = "http://127.0.0.1:8780";

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string = DEFAULT_BASE_URL, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  async plants(): Promise<PlantsResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/plants`);
    return this.decode<PlantsResponse>(resp);
  }

  /** Run one scenario; resolves for both stable (200) and unstable (422) runs. */
  async simulate(body: ScenarioBody): Promise<RunResult> {
    const resp = await this.post("/api/simulate", body);
    if (resp.status === 422) {
      return (await resp.json()) as RunResult;
    }
    return this.decode<RunResult>(resp);
  }

  async sweep(scenario: ScenarioBody, nus: NuConfig[]): Promise<SweepResponse> {
    const resp = await this.post("/api/sweep", { scenario, nus });
    return this.decode<SweepResponse>(resp);
  }

  async margins(
    scenario: ScenarioBody,
    compareBaseline = false,
  ): Promise<MarginsResponse> {
    const resp = await this.post("/api/margins", {
      scenario,
      compare_baseline: compareBaseline,
    });
    return this.decode<MarginsResponse>(resp);
  }

  private post(path: string, body: unknown): Promise<Response> {
    return this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  private async decode<T>(resp: Response): Promise<T> {
    if (resp.status === 400) {
      throw new ValidationError((await resp.json()) as ValidationBody);
    }
    if (!resp.ok) {
      throw new ServiceError(resp.status, `service returned ${resp.status}`);
    }
    return (await resp.json()) as T;
  }
}
