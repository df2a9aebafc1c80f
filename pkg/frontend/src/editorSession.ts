/**
 * State of one QA config-editing session: the draft, its pinned sample
 * report, the latest preview label, and the validation verdict.
 *
 * Every edit runs the client-side validation mirror; only a clean draft is
 * sent to the preview endpoint (and only a clean draft can be saved).
 */

import {
  draftFrom,
  removeMetric,
  setBoundaries,
  setReference,
  setScale,
  setWeight,
  validateConfigDraft,
} from "./configDraft.js";
import { PreviewScheduler, type PreviewFetcher } from "./previewScheduler.js";
import type { EfficiencyConfig, EnergyLabel, MetricDefinition, SampleReport } from "./types.js";

export class EditorSession {
  readonly draft: EfficiencyConfig;
  sampleReport: SampleReport;
  previewLabel: EnergyLabel | null = null;
  previewError: string | null = null;
  violations: string[] = [];

  private readonly scheduler: PreviewScheduler;
  private readonly listeners: (() => void)[] = [];

  constructor(
    base: EfficiencyConfig,
    sampleReport: SampleReport,
    fetcher: PreviewFetcher,
    debounceMs = 300,
  ) {
    this.draft = draftFrom(base);
    this.sampleReport = { ...sampleReport };
    this.scheduler = new PreviewScheduler(
      fetcher,
      (label) => {
        this.previewLabel = label;
        this.previewError = null;
        this.notify();
      },
      (error) => {
        this.previewError = error instanceof Error ? error.message : String(error);
        this.notify();
      },
      debounceMs,
    );
    this.revalidateAndPreview();
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private revalidateAndPreview(): void {
    this.violations = validateConfigDraft(this.draft);
    if (this.violations.length === 0) {
      this.scheduler.request(draftFrom(this.draft), { ...this.sampleReport });
    }
    this.notify();
  }

  get canSave(): boolean {
    return this.violations.length === 0;
  }

  flushPreview(): void {
    this.scheduler.flush();
  }

  // --- edits, each re-validating and re-previewing -----------------------

  changeWeight(metricId: string, weight: number): void {
    setWeight(this.draft, metricId, weight);
    this.revalidateAndPreview();
  }

  changeReference(metricId: string, reference: number): void {
    setReference(this.draft, metricId, reference);
    this.revalidateAndPreview();
  }

  changeBoundaries(metricId: string, boundaries: number[]): void {
    setBoundaries(this.draft, metricId, boundaries);
    this.revalidateAndPreview();
  }

  changeScale(grades: string[], boundariesForAll: number[]): void {
    setScale(this.draft, grades, boundariesForAll);
    this.revalidateAndPreview();
  }

  dropMetric(metricId: string): void {
    removeMetric(this.draft, metricId);
    this.revalidateAndPreview();
  }

  addMetric(metric: MetricDefinition): void {
    this.draft.metrics = [...this.draft.metrics.filter((m) => m.id !== metric.id), metric];
    this.revalidateAndPreview();
  }

  changeSampleValue(fieldId: string, value: number | null): void {
    if (value === null) {
      delete this.sampleReport[fieldId];
    } else {
      this.sampleReport[fieldId] = value;
    }
    this.revalidateAndPreview();
  }
}
