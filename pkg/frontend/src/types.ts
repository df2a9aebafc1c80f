/** Wire types mirroring the documents published at /api/v1/schema. */

export type Phase = "training" | "inference";
export type MetricDirection = "higher_better" | "lower_better";

export interface DerivationRule {
  kind: "none" | "ratio" | "harmonic_mean";
  numerator?: string | null;
  denominator?: string | null;
  sources?: string[];
}

export interface MetricDefinition {
  id: string;
  name: string;
  description?: string;
  unit: string;
  direction: MetricDirection;
  weight: number;
  reference: number;
  boundaries: number[];
  phases: Phase[];
  derivation?: DerivationRule;
}

export interface GradeScale {
  grades: string[];
}

export interface EfficiencyConfig {
  version: number;
  phase: Phase;
  scale: GradeScale;
  metrics: MetricDefinition[];
  carbon_intensity: number;
  created_at?: string;
}

export interface RatedMetric {
  metric_id: string;
  value: number | null;
  index: number | null;
  grade: string | null;
  grade_position: number | null;
  weight_used: number;
  missing: boolean;
}

export interface Recommendation {
  metric_id: string;
  text: string;
}

export interface EnergyLabel {
  label_id: string;
  model_id: string;
  phase: Phase;
  config_version: number;
  rated_metrics: RatedMetric[];
  overall_score: number;
  overall_grade: string;
  recommendations: Recommendation[];
  created_at?: string;
  warnings?: string[];
  probe?: ProbeResult;
}

export interface ProbeResult {
  per_call_latencies_s: number[];
  total_running_time_s: number;
  mean_latency_s: number;
  failures: number;
  energy_kwh: number | null;
  co2e_kg: number | null;
  power_draw_w: number | null;
}

export interface ModelRecord {
  provider_id: string;
  model_id: string;
  display_name: string;
  content_hash: string;
  created_at: string;
  updated_at: string;
  metadata: Record<string, unknown>;
}

export interface Page<T> {
  items: T[];
  total: number;
  page: number;
  page_size: number;
}

export interface SyncRun {
  run_id: string;
  provider_id: string;
  created: number;
  updated: number;
  unchanged: number;
  failed: [string, string][];
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}

export type SampleReport = Record<string, number>;
