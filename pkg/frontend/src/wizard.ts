/**
 * Wizard form state -> API payloads. Blank fields are legal and simply
 * omitted, which is what produces question-mark rows on the label.
 */

import type { EfficiencyConfig, SampleReport } from "./types.js";

export interface FieldSpec {
  id: string;
  label: string;
  unit: string;
  hint?: string;
}

/**
 * The fields a wizard form offers for a config: one input per direct
 * metric plus one per derivation input (users report raw quantities, the
 * server derives ratios and scores).
 */
export function formFields(config: EfficiencyConfig): FieldSpec[] {
  const fields: FieldSpec[] = [];
  const seen = new Set<string>();
  for (const metric of config.metrics) {
    const derivation = metric.derivation ?? { kind: "none" };
    if (derivation.kind === "none") {
      if (!seen.has(metric.id)) {
        seen.add(metric.id);
        fields.push({ id: metric.id, label: metric.name, unit: metric.unit });
      }
      continue;
    }
    const inputs =
      derivation.kind === "ratio"
        ? [derivation.numerator, derivation.denominator]
        : (derivation.sources ?? []);
    for (const input of inputs) {
      if (input && !seen.has(input)) {
        seen.add(input);
        fields.push({ id: input, label: input, unit: "", hint: `feeds ${metric.name}` });
      }
    }
  }
  return fields;
}

/** Parse raw form entries; blanks are dropped, non-numbers are errors. */
export function collectRawValues(
  entries: Record<string, string>,
): { values: SampleReport; errors: Record<string, string> } {
  const values: SampleReport = {};
  const errors: Record<string, string> = {};
  for (const [fieldId, raw] of Object.entries(entries)) {
    const trimmed = raw.trim();
    if (trimmed === "") continue; // blank = not reported = question mark
    const value = Number(trimmed);
    if (!Number.isFinite(value)) {
      errors[fieldId] = "not a number";
    } else if (value < 0) {
      errors[fieldId] = "must be ≥ 0";
    } else {
      values[fieldId] = value;
    }
  }
  return { values, errors };
}

export interface ProbeFormState {
  modelId: string;
  endpointUrl: string;
  sampleBody: string;
  repetitions: string;
  warmup: string;
  powerWatts: string;
}

export function buildProbePayload(state: ProbeFormState): {
  payload?: {
    model_id: string;
    endpoint_url: string;
    samples: string[];
    repetitions?: number;
    warmup?: number;
    power_profile_w?: number;
  };
  errors: Record<string, string>;
} {
  const errors: Record<string, string> = {};
  if (!state.modelId.trim()) errors.modelId = "required";
  if (!state.endpointUrl.trim()) errors.endpointUrl = "required";
  if (!state.sampleBody.trim()) errors.sampleBody = "provide one request body";

  const repetitions = state.repetitions.trim() ? Number(state.repetitions) : 1;
  if (!Number.isInteger(repetitions) || repetitions < 1) errors.repetitions = "positive integer";
  const warmup = state.warmup.trim() ? Number(state.warmup) : 1;
  if (!Number.isInteger(warmup) || warmup < 0) errors.warmup = "non-negative integer";
  const powerWatts = state.powerWatts.trim() ? Number(state.powerWatts) : undefined;
  if (powerWatts !== undefined && !(powerWatts > 0)) errors.powerWatts = "must be > 0";

  if (Object.keys(errors).length) return { errors };
  return {
    errors,
    payload: {
      model_id: state.modelId.trim(),
      endpoint_url: state.endpointUrl.trim(),
      samples: [state.sampleBody],
      repetitions,
      warmup,
      ...(powerWatts !== undefined ? { power_profile_w: powerWatts } : {}),
    },
  };
}
