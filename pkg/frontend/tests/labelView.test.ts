import { describe, expect, it } from "vitest";

import { gradeColor, inferScale, renderGradeBanner, renderLabelView } from "../src/labelView.js";
import type { EnergyLabel, RatedMetric } from "../src/types.js";

function rated(overrides: Partial<RatedMetric> = {}): RatedMetric {
  return {
    metric_id: "co2e_kg",
    value: 10,
    index: 1.0,
    grade: "C",
    grade_position: 2,
    weight_used: 1,
    missing: false,
    ...overrides,
  };
}

function label(overrides: Partial<EnergyLabel> = {}): EnergyLabel {
  return {
    label_id: "l1",
    model_id: "local:m",
    phase: "training",
    config_version: 1,
    rated_metrics: [rated()],
    overall_score: 2.0,
    overall_grade: "C",
    recommendations: [],
    ...overrides,
  };
}

describe("renderLabelView", () => {
  it("renders a question-mark placeholder row for a missing metric", () => {
    const html = renderLabelView(
      label({
        rated_metrics: [
          rated(),
          rated({
            metric_id: "downloads",
            value: null,
            index: null,
            grade: null,
            grade_position: null,
            weight_used: 0,
            missing: true,
          }),
        ],
      }),
      ["A", "B", "C", "D", "E"],
    );
    expect(html).toContain('data-metric="downloads"');
    expect(html).toContain("metric-row missing");
    expect(html).toContain('class="question-mark"');
    // the present metric row carries no question mark
    const presentRow = html.split("\n").find((line) => line.includes('data-metric="co2e_kg"'))!;
    expect(presentRow).not.toContain("question-mark");
  });

  it("renders one banner band per grade on a 7-grade scale", () => {
    const seven = ["A", "B", "C", "D", "E", "F", "G"];
    const html = renderLabelView(
      label({ overall_grade: "F", rated_metrics: [rated({ grade: "F", grade_position: 5 })] }),
      seven,
    );
    expect(html).toContain('data-bands="7"');
    expect(html.match(/banner-band/g)!.length).toBeGreaterThanOrEqual(7);
    for (const grade of seven) {
      expect(html).toContain(`<span class="band-grade">${grade}</span>`);
    }
  });

  it("marks the awarded grade band as active", () => {
    const html = renderGradeBanner(["A", "B", "C"], "B");
    const activeBands = html.match(/banner-band active/g) ?? [];
    expect(activeBands.length).toBe(1);
    expect(html).toContain('banner-marker" data-grade="B"');
  });

  it("renders any 2-grade scale", () => {
    const html = renderGradeBanner(["pass", "fail"], "fail");
    expect(html).toContain('data-bands="2"');
    expect(html).toContain("pass");
    expect(html).toContain("fail");
  });

  it("shows the recommendation panel only when recommendations exist", () => {
    const bare = renderLabelView(label(), ["A", "B", "C", "D", "E"]);
    expect(bare).not.toContain("recommendation-panel");
    const advised = renderLabelView(
      label({ recommendations: [{ metric_id: "co2e_kg", text: "emit less" }] }),
      ["A", "B", "C", "D", "E"],
    );
    expect(advised).toContain("recommendation-panel");
    expect(advised).toContain("emit less");
  });

  it("escapes HTML in model ids and texts", () => {
    const html = renderLabelView(
      label({ model_id: "local:<script>alert(1)</script>" }),
      ["A", "B", "C", "D", "E"],
    );
    expect(html).not.toContain("<script>alert");
    expect(html).toContain("&lt;script&gt;");
  });

  it("renders probe telemetry with one bar per call", () => {
    const html = renderLabelView(
      label({
        probe: {
          per_call_latencies_s: [0.05, 0.06, 0.055],
          total_running_time_s: 0.165,
          mean_latency_s: 0.055,
          failures: 0,
          energy_kwh: 1e-5,
          co2e_kg: 5e-6,
          power_draw_w: 100,
        },
      }),
      ["A", "B", "C", "D", "E"],
    );
    expect(html.match(/latency-bar/g)!.length).toBe(3);
    expect(html).toContain("probe-telemetry");
  });
});

describe("gradeColor", () => {
  it("runs green to red across any scale size", () => {
    for (const size of [2, 5, 7]) {
      expect(gradeColor(0, size)).toContain("hsl(120");
      expect(gradeColor(size - 1, size)).toContain("hsl(0");
    }
  });
});

describe("inferScale", () => {
  it("reconstructs at least the positions seen in the label", () => {
    const grades = inferScale(
      label({
        rated_metrics: [
          rated({ grade: "G", grade_position: 6 }),
          rated({ metric_id: "x", grade: "A", grade_position: 0 }),
        ],
      }),
    );
    expect(grades.length).toBe(7);
    expect(grades[6]).toBe("G");
    expect(grades[0]).toBe("A");
  });
});
