/**
 * Client-side mirror of the server's config validation, plus draft editing.
 * A draft is never submitted (or previewed) while this mirror reports
 * violations; the server re-validates regardless.
 */

import type { EfficiencyConfig, MetricDefinition } from "./types.js";

export function validateConfigDraft(config: EfficiencyConfig): string[] {
  const violations: string[] = [];
  const grades = config.scale.grades;

  if (grades.length < 2) violations.push("scale must have at least 2 grades");
  if (new Set(grades).size !== grades.length) violations.push("grade identifiers must be unique");
  if (grades.some((g) => !g)) violations.push("grade identifiers must be non-empty");
  if (!(config.carbon_intensity > 0) || !Number.isFinite(config.carbon_intensity)) {
    violations.push("carbon_intensity must be a positive finite real");
  }

  const seen = new Set<string>();
  for (const metric of config.metrics) {
    if (seen.has(metric.id)) violations.push(`duplicate metric id "${metric.id}"`);
    seen.add(metric.id);
    violations.push(...validateMetric(metric, grades.length));
    if (!metric.phases.includes(config.phase)) {
      violations.push(`metric "${metric.id}" does not apply to phase "${config.phase}"`);
    }
  }

  if (!config.metrics.length) {
    violations.push("config must define at least one metric");
  } else if (!config.metrics.some((m) => m.weight > 0)) {
    violations.push("at least one metric must have weight > 0");
  }
  return violations;
}

function validateMetric(metric: MetricDefinition, scaleLen: number): string[] {
  const violations: string[] = [];
  if (!metric.id) violations.push("metric id must be non-empty");
  if (!(metric.weight >= 0) || !Number.isFinite(metric.weight)) {
    violations.push(`metric "${metric.id}": weight must be >= 0 and finite`);
  }
  if (!(metric.reference > 0) || !Number.isFinite(metric.reference)) {
    violations.push(`metric "${metric.id}": reference must be > 0 and finite`);
  }
  if (!metric.phases.length) violations.push(`metric "${metric.id}": phases must be non-empty`);

  const bounds = metric.boundaries;
  if (bounds.length !== scaleLen - 1) {
    violations.push(
      `metric "${metric.id}": expected ${scaleLen - 1} boundaries for a ` +
        `${scaleLen}-grade scale, got ${bounds.length}`,
    );
  }
  if (bounds.some((b) => !(b > 0) || !Number.isFinite(b))) {
    violations.push(`metric "${metric.id}": boundaries must be positive finite reals`);
  }
  for (let i = 0; i + 1 < bounds.length; i++) {
    const here = bounds[i]!;
    const next = bounds[i + 1]!;
    if (here <= next) {
      violations.push(`metric "${metric.id}": boundaries not strictly decreasing`);
      break;
    }
  }

  const d = metric.derivation;
  if (d?.kind === "ratio") {
    if (!d.numerator || !d.denominator) {
      violations.push(`metric "${metric.id}": ratio derivation needs numerator and denominator`);
    } else if (d.numerator === d.denominator) {
      violations.push(`metric "${metric.id}": ratio fields must be distinct`);
    }
  } else if (d?.kind === "harmonic_mean" && !(d.sources ?? []).length) {
    violations.push(`metric "${metric.id}": harmonic_mean needs at least one source field`);
  }
  return violations;
}

/** Deep-copy a config into an editable draft. */
export function draftFrom(config: EfficiencyConfig): EfficiencyConfig {
  return JSON.parse(JSON.stringify(config)) as EfficiencyConfig;
}

export function setWeight(draft: EfficiencyConfig, metricId: string, weight: number): void {
  const metric = draft.metrics.find((m) => m.id === metricId);
  if (metric) metric.weight = weight;
}

export function setReference(draft: EfficiencyConfig, metricId: string, reference: number): void {
  const metric = draft.metrics.find((m) => m.id === metricId);
  if (metric) metric.reference = reference;
}

export function setBoundaries(
  draft: EfficiencyConfig,
  metricId: string,
  boundaries: number[],
): void {
  const metric = draft.metrics.find((m) => m.id === metricId);
  if (metric) metric.boundaries = [...boundaries];
}

/** Changing the scale re-cuts every metric with the supplied boundary row. */
export function setScale(
  draft: EfficiencyConfig,
  grades: string[],
  boundariesForAll: number[],
): void {
  draft.scale = { grades: [...grades] };
  for (const metric of draft.metrics) {
    metric.boundaries = [...boundariesForAll];
  }
}

export function removeMetric(draft: EfficiencyConfig, metricId: string): void {
  draft.metrics = draft.metrics.filter((m) => m.id !== metricId);
}

export function addMetric(draft: EfficiencyConfig, metric: MetricDefinition): void {
  draft.metrics = [...draft.metrics.filter((m) => m.id !== metric.id), metric];
}
