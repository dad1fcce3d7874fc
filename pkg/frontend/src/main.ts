/** DOM wiring: containers, the clause builder rows, and event delegation.
 * All content is produced by render.ts from the controller's state. */

import { ApiClient } from "./api.js";
import { buildQuery, emptyClause, type ClauseDraft } from "./grammar.js";
import {
  escapeHtml,
  renderBanner,
  renderGlobals,
  renderSolutions,
  renderTreeBrowser,
} from "./render.js";
import { Controller, type ViewState } from "./state.js";

const serviceUrl =
  new URLSearchParams(window.location.search).get("service") ??
  window.location.origin;

const api = new ApiClient(serviceUrl);
const drafts: ClauseDraft[] = [emptyClause()];

const el = (id: string): HTMLElement => {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing #${id}`);
  }
  return found;
};

function renderClauseBuilder(): void {
  el("clauses").innerHTML = drafts
    .map((draft, index) => {
      const conceptDisabled = draft.conceptWildcard ? "disabled" : "";
      const descriptorDisabled = draft.descriptorMode !== "term" ? "disabled" : "";
      return (
        `<fieldset class="clause-row" data-index="${index}">` +
        `<input data-field="concept" placeholder="concept" ${conceptDisabled}` +
        ` value="${escapeHtml(draft.concept)}">` +
        `<label><input type="checkbox" data-field="conceptWildcard"` +
        ` ${draft.conceptWildcard ? "checked" : ""}> ?</label>` +
        `<span class="sep">:</span>` +
        `<input data-field="descriptor" placeholder="descriptor" ${descriptorDisabled}` +
        ` value="${escapeHtml(draft.descriptor)}">` +
        `<select data-field="descriptorMode">` +
        `<option value="term" ${draft.descriptorMode === "term" ? "selected" : ""}>word</option>` +
        `<option value="wildcard" ${draft.descriptorMode === "wildcard" ? "selected" : ""}>? (fill)</option>` +
        `<option value="any" ${draft.descriptorMode === "any" ? "selected" : ""}>any</option>` +
        `</select>` +
        (drafts.length > 1
          ? `<button data-action="remove-clause" data-index="${index}">&times;</button>`
          : "") +
        `</fieldset>`
      );
    })
    .join("");
}

function renderAll(state: ViewState): void {
  el("banner").innerHTML = state.banner ? renderBanner(state.banner, true) : "";
  el("notice").textContent = state.notice ?? "";
  el("inline-error").textContent = state.inlineError ?? "";
  el("trees").innerHTML = renderTreeBrowser(state.trees, state.details);
  el("results").innerHTML = state.activeResult
    ? renderSolutions(state.activeResult, state.busy)
    : `<p class="empty">Build a query and run it.</p>`;
  el("globals-list").innerHTML = renderGlobals(state.globals);
  el("triggered").textContent = state.triggered
    ? `trigger(${state.triggered.id}) -> ${state.triggered.treeKeys.join(", ")}`
    : "";
  for (const button of document.querySelectorAll<HTMLButtonElement>(
    "button[data-mutating]",
  )) {
    button.disabled = state.busy;
  }
}

const controller = new Controller(api, renderAll);

function wire(): void {
  renderClauseBuilder();

  el("clauses").addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    const row = target.closest<HTMLElement>(".clause-row");
    if (!row) {
      return;
    }
    const draft = drafts[Number(row.dataset.index)];
    if (!draft) {
      return;
    }
    const field = target.dataset.field;
    if (field === "concept") {
      draft.concept = target.value;
    } else if (field === "descriptor") {
      draft.descriptor = target.value;
    } else if (field === "conceptWildcard") {
      draft.conceptWildcard = (target as HTMLInputElement).checked;
      renderClauseBuilder();
    } else if (field === "descriptorMode") {
      draft.descriptorMode = target.value as ClauseDraft["descriptorMode"];
      renderClauseBuilder();
    }
  });

  el("clauses").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>(
      "button[data-action='remove-clause']",
    );
    if (button) {
      drafts.splice(Number(button.dataset.index), 1);
      renderClauseBuilder();
    }
  });

  el("add-clause").addEventListener("click", () => {
    drafts.push(emptyClause());
    renderClauseBuilder();
  });

  el("run-query").addEventListener("click", () => {
    let query: string;
    try {
      query = buildQuery(drafts);
    } catch (error) {
      controller.state.inlineError = String(
        error instanceof Error ? error.message : error,
      );
      renderAll(controller.state);
      return;
    }
    void controller.runQuery(query);
  });

  el("ingest").addEventListener("click", () => {
    const box = el("ingest-text") as HTMLTextAreaElement;
    if (box.value.trim()) {
      void controller.ingest(box.value);
    }
  });

  el("results").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>("button");
    if (!button || button.disabled) {
      return;
    }
    if (button.dataset.action === "approve") {
      void controller.approve(Number(button.dataset.index));
    } else if (button.dataset.action === "reject") {
      void controller.reject();
    }
  });

  el("globals-list").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>(
      "button[data-action='trigger']",
    );
    if (button) {
      void controller.trigger(Number(button.dataset.id));
    }
  });

  el("banner").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>(
      "button[data-action='retry']",
    );
    if (button) {
      void controller.refreshTrees().then(() => controller.refreshGlobals());
    }
  });

  void controller.refreshTrees().then(() => controller.refreshGlobals());
}

wire();
