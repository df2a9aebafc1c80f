/**
 * Hash-routed single-page app over the label service's JSON API.
 *
 * Routes: #/generate/training, #/generate/inference, #/models,
 * #/models/<key>, #/labels/<id>, #/config[/inference]. Deep links work on
 * refresh because every view fetches its own state from the API.
 */

import { ApiClient, ApiError, resolveApiBase } from "./client.js";
import { mountEditorPage } from "./editorPage.js";
import { renderLabelView } from "./labelView.js";
import type { EnergyLabel, Phase } from "./types.js";
import { buildProbePayload, collectRawValues, formFields } from "./wizard.js";

const client = new ApiClient(resolveApiBase());

const NAV = `
<nav class="top-nav">
  <span class="brand">ecolabel</span>
  <a href="#/generate/training">Training label</a>
  <a href="#/generate/inference">Inference label</a>
  <a href="#/models">Models</a>
  <a href="#/config">QA editor</a>
</nav>`;

function appRoot(): HTMLElement {
  return document.getElementById("app")!;
}

function errorBanner(error: unknown): string {
  const message =
    error instanceof ApiError
      ? `${error.envelope.code}: ${error.envelope.message}`
      : String(error);
  return `<div class="error-banner">${message}</div>`;
}

async function route(): Promise<void> {
  const hash = location.hash || "#/generate/training";
  const root = appRoot();
  root.innerHTML = `${NAV}<main id="page" class="page"><p>loading…</p></main>`;
  const page = document.getElementById("page")!;
  try {
    if (hash.startsWith("#/generate/")) {
      await mountWizard(page, hash.includes("inference") ? "inference" : "training");
    } else if (hash.startsWith("#/models/")) {
      await mountModelDetail(page, decodeURIComponent(hash.slice("#/models/".length)));
    } else if (hash.startsWith("#/models")) {
      await mountModelBrowser(page);
    } else if (hash.startsWith("#/labels/")) {
      await mountLabelDetail(page, decodeURIComponent(hash.slice("#/labels/".length)));
    } else if (hash.startsWith("#/config")) {
      await mountEditorPage(page, client);
    } else {
      page.innerHTML = "<p>unknown page</p>";
    }
  } catch (error) {
    page.innerHTML = errorBanner(error);
  }
}

// --- label wizards ----------------------------------------------------------

async function mountWizard(page: HTMLElement, phase: Phase): Promise<void> {
  const config = await client.getConfig(phase);
  const fields = formFields(config);
  const inputs = fields
    .map(
      (f) => `
<label class="wizard-field">
  <span>${f.label}${f.unit ? ` <em>(${f.unit})</em>` : ""}${f.hint ? ` <small>${f.hint}</small>` : ""}</span>
  <input data-field="${f.id}" type="text" inputmode="decimal" placeholder="leave blank for ?">
  <b class="field-error" data-error-for="${f.id}"></b>
</label>`,
    )
    .join("");

  const probeSection =
    phase === "inference"
      ? `
<details class="probe-form">
  <summary>…or probe a deployed endpoint (one click)</summary>
  <label>Endpoint URL <input id="probe-url" placeholder="http://host:port/predict"></label>
  <label>Request body <textarea id="probe-body">{"input": "example"}</textarea></label>
  <label>Repetitions <input id="probe-reps" value="10"></label>
  <label>Warmup calls <input id="probe-warmup" value="1"></label>
  <label>Device power (W, optional) <input id="probe-watts" value=""></label>
  <button id="run-probe">Run probe</button>
</details>`
      : `
<details class="upload-form">
  <summary>…or upload an emission tracker export</summary>
  <input id="upload-file" type="file" accept=".csv,.json">
  <button id="upload-go">Upload and label</button>
</details>`;

  page.innerHTML = `
<h2>Generate a ${phase} label</h2>
<div class="wizard">
  <form id="wizard-form">
    <label class="wizard-field"><span>Model id</span>
      <input id="model-id" placeholder="my-model" required></label>
    ${inputs}
    <button type="submit">Compute label</button>
  </form>
  ${probeSection}
  <div id="wizard-result"></div>
</div>`;

  const result = page.querySelector("#wizard-result") as HTMLElement;

  function showLabel(label: EnergyLabel): void {
    result.innerHTML = renderLabelView(label, config.scale.grades, config);
  }

  page.querySelector("#wizard-form")!.addEventListener("submit", async (event) => {
    event.preventDefault();
    const entries: Record<string, string> = {};
    for (const input of page.querySelectorAll<HTMLInputElement>("input[data-field]")) {
      entries[input.dataset.field!] = input.value;
    }
    const { values, errors } = collectRawValues(entries);
    for (const marker of page.querySelectorAll<HTMLElement>(".field-error")) {
      marker.textContent = errors[marker.dataset.errorFor!] ?? "";
    }
    if (Object.keys(errors).length) return;
    const modelId = (page.querySelector("#model-id") as HTMLInputElement).value || "unnamed";
    try {
      showLabel(await client.generateLabel(phase, modelId, values));
    } catch (error) {
      result.innerHTML = errorBanner(error);
    }
  });

  if (phase === "inference") {
    page.querySelector("#run-probe")?.addEventListener("click", async () => {
      const state = {
        modelId: (page.querySelector("#model-id") as HTMLInputElement).value,
        endpointUrl: (page.querySelector("#probe-url") as HTMLInputElement).value,
        sampleBody: (page.querySelector("#probe-body") as HTMLTextAreaElement).value,
        repetitions: (page.querySelector("#probe-reps") as HTMLInputElement).value,
        warmup: (page.querySelector("#probe-warmup") as HTMLInputElement).value,
        powerWatts: (page.querySelector("#probe-watts") as HTMLInputElement).value,
      };
      const { payload, errors } = buildProbePayload(state);
      if (!payload) {
        result.innerHTML = `<div class="error-banner">${Object.entries(errors)
          .map(([k, v]) => `${k}: ${v}`)
          .join(" · ")}</div>`;
        return;
      }
      result.innerHTML = "<p>probing…</p>";
      try {
        showLabel(await client.probeEndpoint(payload));
      } catch (error) {
        result.innerHTML = errorBanner(error);
      }
    });
  } else {
    page.querySelector("#upload-go")?.addEventListener("click", async () => {
      const picker = page.querySelector("#upload-file") as HTMLInputElement;
      const file = picker.files?.[0];
      if (!file) {
        result.innerHTML = `<div class="error-banner">choose a file first</div>`;
        return;
      }
      const modelId = (page.querySelector("#model-id") as HTMLInputElement).value || "uploaded";
      try {
        showLabel(await client.uploadTrackerFile(modelId, file));
      } catch (error) {
        result.innerHTML = errorBanner(error);
      }
    });
  }
}

// --- model browser ------------------------------------------------------------

async function mountModelBrowser(page: HTMLElement): Promise<void> {
  page.innerHTML = `
<h2>Models and labels</h2>
<div class="browser-filters">
  <input id="filter-grade" placeholder="grade (e.g. A)">
  <input id="filter-provider" placeholder="provider (e.g. huggingface)">
  <select id="filter-phase">
    <option value="">any phase</option>
    <option value="training">training</option>
    <option value="inference">inference</option>
  </select>
  <button id="apply-filters">Filter labels</button>
</div>
<div id="browser-list"><p>loading…</p></div>`;

  const list = page.querySelector("#browser-list") as HTMLElement;

  async function refresh(): Promise<void> {
    const grade = (page.querySelector("#filter-grade") as HTMLInputElement).value.trim();
    const provider = (page.querySelector("#filter-provider") as HTMLInputElement).value.trim();
    const phase = (page.querySelector("#filter-phase") as HTMLSelectElement).value as Phase | "";
    try {
      const labels = await client.listLabels({
        grade: grade || undefined,
        provider: provider || undefined,
        phase: phase || undefined,
      });
      if (!labels.total) {
        list.innerHTML = `<p class="empty-state">no labels yet — generate one from the wizards</p>`;
        return;
      }
      list.innerHTML = `
<p>${labels.total} label(s)</p>
<table class="browser-table">
  <thead><tr><th>model</th><th>phase</th><th>grade</th><th>score</th><th>when</th></tr></thead>
  <tbody>
    ${labels.items
      .map(
        (l) => `
    <tr class="browser-row" data-label="${l.label_id}">
      <td><a href="#/models/${encodeURIComponent(l.model_id)}">${l.model_id}</a></td>
      <td>${l.phase}</td>
      <td><a href="#/labels/${l.label_id}" class="grade-link">${l.overall_grade}</a></td>
      <td>${l.overall_score.toFixed(2)}</td>
      <td>${(l.created_at ?? "").slice(0, 19)}</td>
    </tr>`,
      )
      .join("")}
  </tbody>
</table>`;
    } catch (error) {
      list.innerHTML = errorBanner(error);
    }
  }

  page.querySelector("#apply-filters")!.addEventListener("click", refresh);
  await refresh();
}

async function mountModelDetail(page: HTMLElement, modelKey: string): Promise<void> {
  const labels = await client.modelLabels(modelKey);
  page.innerHTML = `
<h2>${modelKey}</h2>
<p>${labels.total} label(s), newest first</p>
<div id="history">
${labels.items.map((l) => renderLabelView(l)).join("\n<hr>\n")}
</div>`;
}

async function mountLabelDetail(page: HTMLElement, labelId: string): Promise<void> {
  const label = await client.getLabel(labelId);
  const config = await client
    .getConfig(label.phase)
    .catch(() => undefined);
  const scale =
    config && config.version === label.config_version ? config.scale.grades : undefined;
  page.innerHTML = renderLabelView(label, scale, config);
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
