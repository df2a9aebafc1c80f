/**
 * Typed API client. Every grade and score shown in the UI originates here;
 * the browser does no efficiency math of its own.
 */

import type {
  EfficiencyConfig,
  EnergyLabel,
  ErrorEnvelope,
  ModelRecord,
  Page,
  Phase,
  SampleReport,
  SyncRun,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly envelope: ErrorEnvelope,
  ) {
    super(envelope.message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  /** QA bearer token, kept in memory only and never persisted. */
  qaToken: string | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    authenticated = false,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    let payload: BodyInit | undefined;
    if (body instanceof FormData) {
      payload = body;
    } else if (body !== undefined) {
      headers["content-type"] = "application/json";
      payload = JSON.stringify(body);
    }
    if (authenticated) {
      headers["authorization"] = `Bearer ${this.qaToken ?? ""}`;
    }
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: payload,
    });
    if (response.status === 204) {
      return undefined as T;
    }
    const parsed = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, parsed as ErrorEnvelope);
    }
    return parsed as T;
  }

  // --- labels ---------------------------------------------------------

  generateLabel(phase: Phase, modelId: string, rawValues: SampleReport): Promise<EnergyLabel> {
    return this.request("POST", `/labels/${phase}`, {
      model_id: modelId,
      raw_values: rawValues,
    });
  }

  uploadTrackerFile(modelId: string, file: File, mapping?: object): Promise<EnergyLabel> {
    const form = new FormData();
    form.append("file", file);
    form.append("model_id", modelId);
    if (mapping) form.append("mapping", JSON.stringify(mapping));
    return this.request("POST", "/labels/training/file", form);
  }

  probeEndpoint(body: {
    model_id: string;
    endpoint_url: string;
    samples: string[];
    repetitions?: number;
    warmup?: number;
    power_profile_w?: number;
  }): Promise<EnergyLabel> {
    return this.request("POST", "/labels/inference/probe", body);
  }

  getLabel(labelId: string): Promise<EnergyLabel> {
    return this.request("GET", `/labels/${encodeURIComponent(labelId)}`);
  }

  listLabels(filters: {
    grade?: string;
    phase?: Phase;
    provider?: string;
    model_id?: string;
    page?: number;
  } = {}): Promise<Page<EnergyLabel>> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filters)) {
      if (value !== undefined && value !== "") params.set(key, String(value));
    }
    const query = params.toString();
    return this.request("GET", `/labels${query ? "?" + query : ""}`);
  }

  // --- models ---------------------------------------------------------

  listModels(page = 1, provider?: string): Promise<Page<ModelRecord>> {
    const params = new URLSearchParams({ page: String(page) });
    if (provider) params.set("provider", provider);
    return this.request("GET", `/models?${params}`);
  }

  modelLabels(modelKey: string): Promise<Page<EnergyLabel>> {
    return this.request("GET", `/models/${modelKey}/labels`);
  }

  deleteModel(modelKey: string): Promise<void> {
    return this.request("DELETE", `/models/${modelKey}`, undefined, true);
  }

  // --- configs ----------------------------------------------------------

  getConfig(phase: Phase): Promise<EfficiencyConfig> {
    return this.request("GET", `/configs/${phase}`);
  }

  putConfig(phase: Phase, config: EfficiencyConfig): Promise<EfficiencyConfig> {
    return this.request("PUT", `/configs/${phase}`, config, true);
  }

  patchConfig(phase: Phase, patch: object): Promise<EfficiencyConfig> {
    return this.request("PATCH", `/configs/${phase}`, patch, true);
  }

  previewConfig(
    phase: Phase,
    candidate: EfficiencyConfig,
    sampleReport: SampleReport,
  ): Promise<EnergyLabel> {
    return this.request("POST", `/configs/${phase}/preview`, {
      candidate_config: candidate,
      sample_report: { raw_values: sampleReport },
    });
  }

  configVersions(phase: Phase): Promise<{ versions: number[] }> {
    return this.request("GET", `/configs/${phase}/versions`);
  }

  // --- sync --------------------------------------------------------------

  triggerSync(provider: string, limit?: number): Promise<SyncRun> {
    const query = limit ? `?limit=${limit}` : "";
    return this.request("POST", `/sync/${provider}${query}`, undefined, true);
  }
}

/** Resolve the API base URL: global override, then same-origin default. */
export function resolveApiBase(): string {
  const override = (globalThis as { ECOLABEL_API_BASE?: string }).ECOLABEL_API_BASE;
  if (override) return override.replace(/\/$/, "");
  if (typeof location !== "undefined" && location.origin.startsWith("http")) {
    return location.origin;
  }
  return "http://127.0.0.1:8000";
}
