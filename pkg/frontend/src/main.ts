/** DOM wiring for the labeling console. All state lives in the store;
    this module just renders it and forwards events. */

import { ApiClient } from "./api.js";
import { accuracySeries, renderAccuracyChart } from "./chart.js";
import { isEditableTarget, keyAction } from "./keyboard.js";
import { renderBatchScatter } from "./scatter.js";
import { LabelingStore } from "./store.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

const api = new ApiClient("");
const store = new LabelingStore(api, { storage: window.localStorage });

function renderMeta(): string {
  const session = store.session;
  if (!session) return "";
  const hash = store.configHash ? store.configHash.slice(0, 10) : "";
  return (
    `<span class="meta-item">iteration <strong id="iteration">${session.iteration}</strong></span>` +
    `<span class="meta-item">labeled <strong>${session.labeled_count}</strong> / ${session.budget}</span>` +
    `<span class="meta-item mono" title="config hash">${esc(hash)}</span>`
  );
}

function renderPaletteButtons(id: number, choice: number | null): string {
  return store.palette
    .map((cls) => {
      const on = choice === cls.id ? " on" : "";
      const hint = cls.id < 9 ? `<kbd>${cls.id + 1}</kbd> ` : "";
      return (
        `<button class="cls${on}" data-id="${id}" data-cls="${cls.id}">` +
        `${hint}${esc(cls.name)}</button>`
      );
    })
    .join("");
}

function renderCards(): string {
  const preview = store.pending.map((item) => item.preview);
  return store.pending
    .map((item, index) => {
      const focus = index === store.focus ? " focused" : "";
      const done = item.choice !== null ? " chosen" : "";
      return (
        `<article class="card${focus}${done}" data-card="${item.id}">` +
        renderBatchScatter(preview, index) +
        `<div class="card-body">` +
        `<div class="card-title">point ${item.id}</div>` +
        `<div class="palette">${renderPaletteButtons(item.id, item.choice)}</div>` +
        `</div></article>`
      );
    })
    .join("");
}

function renderStatus(): string {
  switch (store.phase) {
    case "loading":
      return `<p class="note">loading session...</p>`;
    case "stale":
      return (
        `<div class="banner warn"><p>The service is running a different ` +
        `session than the one this page loaded.</p>` +
        `<button data-action="reload">reload session</button></div>`
      );
    case "error":
      return (
        `<div class="banner warn"><p>${esc(store.error ?? "request failed")}</p>` +
        `<button data-action="retry">retry</button></div>`
      );
    case "done": {
      const acc = store.finalAccuracy;
      const session = store.session;
      const accText =
        acc === null
          ? "no ground truth available"
          : `final accuracy <strong title="${JSON.stringify(acc)}">` +
            `${(acc * 100).toFixed(2)}%</strong>`;
      const labels = session ? session.labeled_count : 0;
      return (
        `<div class="banner done"><p>Labeling complete: ${labels} points ` +
        `labeled. ${accText}.</p></div>`
      );
    }
    default: {
      const banner = store.error
        ? `<div class="banner warn"><p>${esc(store.error)}</p></div>`
        : "";
      const left = store.pending.filter((p) => p.choice === null).length;
      const hint =
        left > 0
          ? `${left} of ${store.pending.length} still need a class`
          : "all labeled; press Enter to submit";
      return `${banner}<p class="note">${hint}</p>`;
    }
  }
}

function render(): void {
  el("meta").innerHTML = renderMeta();
  el("status").innerHTML = renderStatus();
  const labeling = store.phase === "labeling" || store.phase === "submitting";
  el("batch").innerHTML = labeling ? renderCards() : "";
  el("chart").innerHTML = renderAccuracyChart(accuracySeries(store.history));
  const submit = el("submit") as HTMLButtonElement;
  submit.hidden = !labeling;
  submit.disabled = !store.canSubmit;
  submit.textContent =
    store.phase === "submitting" ? "submitting..." : "submit labels";
}

document.addEventListener("click", (event) => {
  const target = event.target;
  if (!(target instanceof Element)) return;
  const action = target.closest("[data-action]");
  if (action instanceof HTMLElement) {
    if (action.dataset.action === "reload") window.location.reload();
    if (action.dataset.action === "retry") void store.load();
    return;
  }
  const clsButton = target.closest("[data-cls]");
  if (clsButton instanceof HTMLElement) {
    store.choose(Number(clsButton.dataset.id), Number(clsButton.dataset.cls));
    return;
  }
  const card = target.closest("[data-card]");
  if (card instanceof HTMLElement) {
    store.focusCard(Number(card.dataset.card));
  }
});

document.addEventListener("keydown", (event) => {
  if (isEditableTarget(event.target)) return;
  const action = keyAction(event.key, store.palette.length);
  if (!action) return;
  event.preventDefault();
  switch (action.type) {
    case "label":
      store.labelFocused(action.cls);
      break;
    case "next":
      store.focusNext();
      break;
    case "prev":
      store.focusPrev();
      break;
    case "submit":
      void store.submit();
      break;
  }
});

el("submit").addEventListener("click", () => {
  void store.submit();
});

store.subscribe(render);
render();
void store.load();
