/**
 * Debounced what-if previews with stale-response protection.
 *
 * Every fired request gets a monotonically increasing id; a response is
 * applied only if no newer request has been applied yet, so out-of-order
 * resolutions can never paint an older draft's label over a newer one.
 */

import type { EfficiencyConfig, EnergyLabel, SampleReport } from "./types.js";

export type PreviewFetcher = (
  candidate: EfficiencyConfig,
  sample: SampleReport,
) => Promise<EnergyLabel>;

export class PreviewScheduler {
  private counter = 0;
  private newestApplied = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: { candidate: EfficiencyConfig; sample: SampleReport } | null = null;

  constructor(
    private readonly fetcher: PreviewFetcher,
    private readonly onResult: (label: EnergyLabel) => void,
    private readonly onError: (error: unknown) => void = () => {},
    private readonly debounceMs = 300,
  ) {}

  /** Schedule a preview of the given draft; earlier unsent drafts are coalesced. */
  request(candidate: EfficiencyConfig, sample: SampleReport): void {
    this.pending = { candidate, sample };
    if (this.timer !== null) clearTimeout(this.timer);
    if (this.debounceMs <= 0) {
      this.flush();
      return;
    }
    this.timer = setTimeout(() => this.flush(), this.debounceMs);
  }

  /** Fire the pending draft immediately (also used on editor blur/save). */
  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    if (!this.pending) return;
    const { candidate, sample } = this.pending;
    this.pending = null;
    void this.fire(candidate, sample);
  }

  get inFlightCount(): number {
    return this.counter - this.newestApplied;
  }

  private async fire(candidate: EfficiencyConfig, sample: SampleReport): Promise<void> {
    const id = ++this.counter;
    try {
      const label = await this.fetcher(candidate, sample);
      if (id > this.newestApplied) {
        this.newestApplied = id;
        this.onResult(label);
      }
    } catch (error) {
      if (id > this.newestApplied) {
        this.newestApplied = id;
        this.onError(error);
      }
    }
  }
}
