/**
 * Label rendering: the banded arrow banner, per-metric rows, and the
 * recommendation panel. Pure string templates, schema-driven — any label
 * valid under the published schema renders, whatever the scale size.
 */

import type { EfficiencyConfig, EnergyLabel, ProbeResult, RatedMetric } from "./types.js";

/** Best-to-worst color ramp, green to red, for any number of grades. */
export function gradeColor(position: number, scaleSize: number): string {
  const span = Math.max(scaleSize - 1, 1);
  const hue = 120 - (120 * Math.min(position, span)) / span;
  return `hsl(${Math.round(hue)}, 72%, 42%)`;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** The vertical banded arrow: one band per grade, best at top, marker on the awarded grade. */
export function renderGradeBanner(grades: string[], overallGrade: string): string {
  const bands = grades
    .map((grade, position) => {
      const widthPct = 45 + (50 * position) / Math.max(grades.length - 1, 1);
      const active = grade === overallGrade;
      const marker = active
        ? `<span class="banner-marker" data-grade="${escapeHtml(grade)}">${escapeHtml(grade)}</span>`
        : "";
      return (
        `<div class="banner-band${active ? " active" : ""}" ` +
        `style="width:${widthPct.toFixed(1)}%;background:${gradeColor(position, grades.length)}">` +
        `<span class="band-grade">${escapeHtml(grade)}</span></div>${marker}`
      );
    })
    .join("\n");
  return `<div class="grade-banner" data-bands="${grades.length}">\n${bands}\n</div>`;
}

function formatValue(value: number | null): string {
  if (value === null) return "";
  if (value !== 0 && (Math.abs(value) >= 1e6 || Math.abs(value) < 1e-3)) {
    return value.toExponential(2);
  }
  return String(Math.round(value * 1000) / 1000);
}

/** One metric row; missing metrics always show the question-mark placeholder. */
export function renderMetricRow(
  rated: RatedMetric,
  scaleSize: number,
  metricName?: string,
  unit?: string,
): string {
  const name = escapeHtml(metricName ?? rated.metric_id);
  if (rated.missing) {
    return (
      `<tr class="metric-row missing" data-metric="${escapeHtml(rated.metric_id)}">` +
      `<td class="metric-name">${name}</td>` +
      `<td class="metric-value"><span class="question-mark" title="not reported">?</span></td>` +
      `<td class="metric-index">—</td>` +
      `<td class="metric-grade"><span class="grade-chip chip-missing">?</span></td></tr>`
    );
  }
  const color = gradeColor(rated.grade_position ?? 0, scaleSize);
  return (
    `<tr class="metric-row" data-metric="${escapeHtml(rated.metric_id)}">` +
    `<td class="metric-name">${name}</td>` +
    `<td class="metric-value">${formatValue(rated.value)}${unit ? " " + escapeHtml(unit) : ""}</td>` +
    `<td class="metric-index">${formatValue(rated.index)}</td>` +
    `<td class="metric-grade"><span class="grade-chip" style="background:${color}">` +
    `${escapeHtml(rated.grade ?? "")}</span></td></tr>`
  );
}

export function renderRecommendations(label: EnergyLabel): string {
  if (!label.recommendations.length) return "";
  const items = label.recommendations
    .map(
      (rec) =>
        `<li class="recommendation" data-metric="${escapeHtml(rec.metric_id)}">` +
        `${escapeHtml(rec.text)}</li>`,
    )
    .join("\n");
  return `<div class="recommendation-panel"><h3>How to improve</h3><ul>\n${items}\n</ul></div>`;
}

export function renderProbeTelemetry(probe: ProbeResult): string {
  const worst = Math.max(...probe.per_call_latencies_s, 1e-9);
  const bars = probe.per_call_latencies_s
    .map((latency, i) => {
      const pct = ((100 * latency) / worst).toFixed(1);
      const ms = (latency * 1000).toFixed(1);
      return (
        `<div class="latency-bar" title="call ${i + 1}: ${ms} ms">` +
        `<span style="width:${pct}%"></span><em>${ms} ms</em></div>`
      );
    })
    .join("\n");
  const energy =
    probe.energy_kwh !== null
      ? `<p>energy ${probe.energy_kwh.toExponential(2)} kWh` +
        (probe.co2e_kg !== null ? ` · ${probe.co2e_kg.toExponential(2)} kg CO2e` : "") +
        `</p>`
      : "";
  return (
    `<div class="probe-telemetry"><h3>Probe telemetry</h3>` +
    `<p>${probe.per_call_latencies_s.length} calls · mean ` +
    `${(probe.mean_latency_s * 1000).toFixed(1)} ms · ${probe.failures} failed</p>` +
    `${energy}<div class="latency-list">\n${bars}\n</div></div>`
  );
}

/**
 * The full label view. `scaleGrades` comes from the config the label was
 * computed with; when unknown, the grades are reconstructed from the rated
 * metrics so old labels still render after config changes.
 */
export function renderLabelView(
  label: EnergyLabel,
  scaleGrades?: string[],
  config?: EfficiencyConfig,
): string {
  const grades = scaleGrades ?? inferScale(label);
  const names = new Map((config?.metrics ?? []).map((m) => [m.id, m]));
  const rows = label.rated_metrics
    .map((rated) => {
      const metric = names.get(rated.metric_id);
      return renderMetricRow(rated, grades.length, metric?.name, metric?.unit);
    })
    .join("\n");
  const warnings = (label.warnings ?? [])
    .map((w) => `<p class="warning">${escapeHtml(w)}</p>`)
    .join("");
  return `
<div class="label-view" data-label-id="${escapeHtml(label.label_id)}">
  <div class="label-head">
    <h2>${escapeHtml(label.model_id)}</h2>
    <p class="label-meta">${label.phase} phase · config v${label.config_version} ·
      score ${label.overall_score.toFixed(2)}</p>
  </div>
  ${renderGradeBanner(grades, label.overall_grade)}
  <table class="metric-table">
    <thead><tr><th>metric</th><th>value</th><th>index</th><th>grade</th></tr></thead>
    <tbody>
${rows}
    </tbody>
  </table>
  ${warnings}
  ${label.probe ? renderProbeTelemetry(label.probe) : ""}
  ${renderRecommendations(label)}
</div>`;
}

/** Fall back to the grades seen in the label itself (overall + per metric). */
export function inferScale(label: EnergyLabel): string[] {
  const byPosition = new Map<number, string>();
  let maxPosition = 0;
  for (const rated of label.rated_metrics) {
    if (!rated.missing && rated.grade !== null && rated.grade_position !== null) {
      byPosition.set(rated.grade_position, rated.grade);
      maxPosition = Math.max(maxPosition, rated.grade_position);
    }
  }
  const defaults = ["A", "B", "C", "D", "E", "F", "G"];
  const size = Math.max(maxPosition + 1, 5);
  return Array.from(
    { length: size },
    (_, i) => byPosition.get(i) ?? defaults[i] ?? `#${i + 1}`,
  );
}
