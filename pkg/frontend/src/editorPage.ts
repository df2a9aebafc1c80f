/**
 * QA config editor page: edit the draft on the left, watch the previewed
 * label recompute next to the current one on the right. Saving issues an
 * authenticated PUT of the whole draft as a new version.
 */

import type { ApiClient } from "./client.js";
import { ApiError } from "./client.js";
import { EditorSession } from "./editorSession.js";
import { renderLabelView } from "./labelView.js";
import type { EfficiencyConfig, EnergyLabel, Phase } from "./types.js";

const DEFAULT_SAMPLE: Record<Phase, Record<string, number>> = {
  training: {
    energy_consumption_kwh: 50,
    downloads: 10_000,
    co2e_kg: 10,
    model_size_mb: 1000,
    dataset_size_mb: 10_000,
    accuracy: 0.75,
  },
  inference: { running_time_s: 1, power_draw_w: 150, co2e_kg: 10, file_size_mb: 500 },
};

export async function mountEditorPage(root: HTMLElement, client: ApiClient): Promise<void> {
  const phase: Phase = location.hash.includes("inference") ? "inference" : "training";
  const current = await client.getConfig(phase);
  const currentLabel = await client
    .previewConfig(phase, current, DEFAULT_SAMPLE[phase])
    .catch(() => null);

  const session = new EditorSession(
    current,
    DEFAULT_SAMPLE[phase],
    (candidate, sample) => client.previewConfig(phase, candidate, sample),
  );

  root.innerHTML = `
<div class="editor-page">
  <div class="editor-toolbar">
    <h2>Label definition — ${phase} (current v${current.version})</h2>
    <span class="spacer"></span>
    <input id="qa-token" type="password" placeholder="QA token (kept in memory)"
           value="${client.qaToken ?? ""}">
    <button id="save-config" disabled>Save as new version</button>
  </div>
  <p id="editor-status" class="editor-status"></p>
  <div class="editor-split">
    <div class="editor-form">
      <label class="scale-edit">Scale (best first, comma-separated)
        <input id="scale-input" value="${current.scale.grades.join(",")}">
      </label>
      <label class="scale-edit">Boundaries for all metrics when the scale changes
        <input id="scale-bounds" placeholder="e.g. 2.0,1.25,0.8,0.5">
      </label>
      <table class="editor-table">
        <thead><tr><th>metric</th><th>weight</th><th>reference</th><th>boundaries</th></tr></thead>
        <tbody id="metric-rows"></tbody>
      </table>
      <h3>Pinned sample report</h3>
      <div id="sample-fields" class="sample-fields"></div>
    </div>
    <div class="editor-preview">
      <div class="preview-pane">
        <h3>Current</h3>
        <div id="current-label">${currentLabel ? renderLabelView(currentLabel, current.scale.grades, current) : "<p>(sample not ratable)</p>"}</div>
      </div>
      <div class="preview-pane">
        <h3>Draft preview</h3>
        <div id="preview-label"><p>computing…</p></div>
      </div>
    </div>
  </div>
</div>`;

  const metricRows = root.querySelector("#metric-rows") as HTMLElement;
  const sampleFields = root.querySelector("#sample-fields") as HTMLElement;
  const statusLine = root.querySelector("#editor-status") as HTMLElement;
  const previewBox = root.querySelector("#preview-label") as HTMLElement;
  const saveButton = root.querySelector("#save-config") as HTMLButtonElement;
  const tokenInput = root.querySelector("#qa-token") as HTMLInputElement;

  function renderForm(): void {
    metricRows.innerHTML = session.draft.metrics
      .map(
        (m) => `
<tr data-metric="${m.id}">
  <td>${m.name || m.id}<button class="drop-metric" data-metric="${m.id}" title="remove">×</button></td>
  <td><input class="weight-input" data-metric="${m.id}" type="number" min="0" step="0.5" value="${m.weight}"></td>
  <td><input class="reference-input" data-metric="${m.id}" type="number" min="0" step="any" value="${m.reference}"></td>
  <td><input class="bounds-input" data-metric="${m.id}" value="${m.boundaries.join(",")}"></td>
</tr>`,
      )
      .join("");
    sampleFields.innerHTML = Object.entries(session.sampleReport)
      .map(
        ([field, value]) => `
<label>${field}<input class="sample-input" data-field="${field}" type="number" step="any" value="${value}"></label>`,
      )
      .join("");
    wireInputs();
  }

  function renderStatus(): void {
    if (session.violations.length) {
      statusLine.textContent = session.violations.join(" · ");
      statusLine.className = "editor-status invalid";
    } else if (session.previewError) {
      statusLine.textContent = `preview failed: ${session.previewError}`;
      statusLine.className = "editor-status invalid";
    } else {
      statusLine.textContent = "draft valid";
      statusLine.className = "editor-status ok";
    }
    saveButton.disabled = !session.canSave;
    if (session.previewLabel) {
      previewBox.innerHTML = renderLabelView(
        session.previewLabel,
        session.draft.scale.grades,
        session.draft,
      );
    }
  }

  function wireInputs(): void {
    for (const input of metricRows.querySelectorAll<HTMLInputElement>(".weight-input")) {
      input.addEventListener("input", () =>
        session.changeWeight(input.dataset.metric!, Number(input.value)),
      );
    }
    for (const input of metricRows.querySelectorAll<HTMLInputElement>(".reference-input")) {
      input.addEventListener("input", () =>
        session.changeReference(input.dataset.metric!, Number(input.value)),
      );
    }
    for (const input of metricRows.querySelectorAll<HTMLInputElement>(".bounds-input")) {
      input.addEventListener("change", () =>
        session.changeBoundaries(
          input.dataset.metric!,
          input.value.split(",").map((x) => Number(x.trim())),
        ),
      );
    }
    for (const button of metricRows.querySelectorAll<HTMLButtonElement>(".drop-metric")) {
      button.addEventListener("click", () => {
        session.dropMetric(button.dataset.metric!);
        renderForm();
      });
    }
    for (const input of sampleFields.querySelectorAll<HTMLInputElement>(".sample-input")) {
      input.addEventListener("input", () =>
        session.changeSampleValue(
          input.dataset.field!,
          input.value.trim() === "" ? null : Number(input.value),
        ),
      );
    }
  }

  const scaleInput = root.querySelector("#scale-input") as HTMLInputElement;
  const scaleBounds = root.querySelector("#scale-bounds") as HTMLInputElement;
  scaleInput.addEventListener("change", applyScale);
  scaleBounds.addEventListener("change", applyScale);

  function applyScale(): void {
    const grades = scaleInput.value.split(",").map((g) => g.trim()).filter(Boolean);
    const bounds = scaleBounds.value
      .split(",")
      .map((x) => Number(x.trim()))
      .filter((x) => Number.isFinite(x));
    if (grades.length >= 2 && bounds.length === grades.length - 1) {
      session.changeScale(grades, bounds);
      renderForm();
    } else if (grades.length >= 2) {
      statusLine.textContent = `a ${grades.length}-grade scale needs ${grades.length - 1} boundaries`;
      statusLine.className = "editor-status invalid";
    }
  }

  tokenInput.addEventListener("input", () => {
    client.qaToken = tokenInput.value || null;
  });

  saveButton.addEventListener("click", async () => {
    try {
      const saved = await client.putConfig(phase, session.draft);
      statusLine.textContent = `saved as version ${saved.version}`;
      statusLine.className = "editor-status ok";
      const versions = await client.configVersions(phase);
      statusLine.textContent += ` · history: v${versions.versions.join(", v")}`;
    } catch (error) {
      if (error instanceof ApiError && (error.status === 401 || error.status === 403)) {
        statusLine.textContent = "enter a valid QA token to save";
      } else {
        statusLine.textContent = `save failed: ${(error as Error).message}`;
      }
      statusLine.className = "editor-status invalid";
    }
  });

  session.onChange(renderStatus);
  renderForm();
  renderStatus();
}
