import { describe, expect, it } from "vitest";

import { buildProbePayload, collectRawValues, formFields } from "../src/wizard.js";
import type { EfficiencyConfig } from "../src/types.js";

describe("collectRawValues", () => {
  it("drops blank fields so they become question marks server-side", () => {
    const { values, errors } = collectRawValues({
      co2e_kg: "2.5",
      downloads: "",
      accuracy: "  ",
    });
    expect(values).toEqual({ co2e_kg: 2.5 });
    expect(errors).toEqual({});
  });

  it("flags non-numeric and negative entries per field", () => {
    const { values, errors } = collectRawValues({
      co2e_kg: "abc",
      downloads: "-3",
      f1: "0.9",
    });
    expect(values).toEqual({ f1: 0.9 });
    expect(Object.keys(errors).sort()).toEqual(["co2e_kg", "downloads"]);
  });
});

describe("formFields", () => {
  it("offers direct metrics plus derivation inputs, never derived ids", () => {
    const config: EfficiencyConfig = {
      version: 1,
      phase: "training",
      scale: { grades: ["A", "B"] },
      carbon_intensity: 0.475,
      metrics: [
        {
          id: "co2e_kg", name: "CO2e", unit: "kg", direction: "lower_better",
          weight: 1, reference: 10, boundaries: [1.0], phases: ["training"],
          derivation: { kind: "none" },
        },
        {
          id: "size_efficiency", name: "Size efficiency", unit: "MB/kg",
          direction: "higher_better", weight: 1, reference: 100, boundaries: [1.0],
          phases: ["training"],
          derivation: { kind: "ratio", numerator: "model_size_mb", denominator: "co2e_kg" },
        },
        {
          id: "performance_score", name: "Performance", unit: "", direction: "higher_better",
          weight: 1, reference: 0.75, boundaries: [1.0], phases: ["training"],
          derivation: { kind: "harmonic_mean", sources: ["accuracy", "f1"] },
        },
      ],
    };
    const ids = formFields(config).map((f) => f.id);
    expect(ids).toContain("co2e_kg");
    expect(ids).toContain("model_size_mb");
    expect(ids).toContain("accuracy");
    expect(ids).toContain("f1");
    expect(ids).not.toContain("size_efficiency");
    expect(ids).not.toContain("performance_score");
    // no duplicates even though co2e_kg is both a metric and a ratio input
    expect(new Set(ids).size).toBe(ids.length);
  });
});

describe("buildProbePayload", () => {
  const filled = {
    modelId: "m",
    endpointUrl: "http://host/predict",
    sampleBody: '{"x": 1}',
    repetitions: "5",
    warmup: "2",
    powerWatts: "100",
  };

  it("builds a complete payload", () => {
    const { payload, errors } = buildProbePayload(filled);
    expect(errors).toEqual({});
    expect(payload).toEqual({
      model_id: "m",
      endpoint_url: "http://host/predict",
      samples: ['{"x": 1}'],
      repetitions: 5,
      warmup: 2,
      power_profile_w: 100,
    });
  });

  it("omits the power profile when blank", () => {
    const { payload } = buildProbePayload({ ...filled, powerWatts: "" });
    expect(payload && "power_profile_w" in payload).toBe(false);
  });

  it("requires url, model and body; validates numerics", () => {
    const { payload, errors } = buildProbePayload({
      modelId: "",
      endpointUrl: "",
      sampleBody: "",
      repetitions: "0",
      warmup: "-1",
      powerWatts: "nope",
    });
    expect(payload).toBeUndefined();
    expect(Object.keys(errors).sort()).toEqual(
      ["endpointUrl", "modelId", "powerWatts", "repetitions", "sampleBody", "warmup"],
    );
  });
});
