/**
 * DOM rendering: a deterministic function of the application state.
 * Handlers are plain callbacks wired in by main.ts; rendering never
 * calls the network itself.
 */

import type { SessionResource } from "./api.js";
import {
  AppState,
  BindingState,
  changedCellCount,
  computeChangedCells,
  requiredSlotsFilled,
} from "./state.js";

export interface Handlers {
  pickAssistant(id: string): void;
  bindFile(slot: string, file: File | null): void;
  bindPath(slot: string, path: string): void;
  setGazetteer(path: string): void;
  setColumn(column: string): void;
  createSession(): void;
  selectChoice(index: number): void;
  accept(): void;
  downloadResult(): void;
  restart(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderApp(state: AppState, handlers: Handlers): HTMLElement {
  const root = el("div", "app");
  const title = el("header", "app-header");
  title.appendChild(el("h1", undefined, "wrangle"));
  title.appendChild(
    el("p", "tagline", "recommend, preview, refine by constraint, accept"),
  );
  root.appendChild(title);

  switch (state.screen) {
    case "loading":
      root.appendChild(el("p", "notice", "loading assistants..."));
      break;
    case "gallery":
      root.appendChild(renderGallery(state.assistants, state.error, handlers));
      break;
    case "binding":
      root.appendChild(renderBinding(state.binding, state.busy, state.error, handlers));
      break;
    case "session":
      root.appendChild(
        renderSession(state.resource, state.busy, state.notice, state.resultCsv, handlers),
      );
      break;
  }
  return root;
}

function renderGallery(
  assistants: { id: string; display_name: string; input_slots: string[] }[],
  error: string | null,
  handlers: Handlers,
): HTMLElement {
  const panel = el("section", "gallery");
  panel.appendChild(el("h2", undefined, "Pick an assistant"));
  if (error) panel.appendChild(el("p", "error", error));
  const list = el("div", "gallery-grid");
  for (const assistant of assistants) {
    const card = el("button", "assistant-card");
    card.dataset.assistant = assistant.id;
    card.appendChild(el("strong", undefined, assistant.display_name));
    card.appendChild(el("code", undefined, assistant.id));
    card.appendChild(
      el("small", undefined, `inputs: ${assistant.input_slots.join(", ")}`),
    );
    card.addEventListener("click", () => handlers.pickAssistant(assistant.id));
    list.appendChild(card);
  }
  panel.appendChild(list);
  return panel;
}

function renderBinding(
  binding: BindingState,
  busy: boolean,
  error: string | null,
  handlers: Handlers,
): HTMLElement {
  const panel = el("section", "binding");
  panel.appendChild(el("h2", undefined, `Bind datasets for ${binding.assistant.display_name}`));
  if (error) panel.appendChild(el("p", "error", error));

  for (const slot of binding.assistant.input_slots) {
    const row = el("div", "slot-row");
    row.appendChild(el("label", "slot-name", slot));

    const fileInput = el("input") as HTMLInputElement;
    fileInput.type = "file";
    fileInput.dataset.slot = slot;
    fileInput.addEventListener("change", () =>
      handlers.bindFile(slot, fileInput.files?.[0] ?? null),
    );
    row.appendChild(fileInput);

    const pathInput = el("input", "path-input") as HTMLInputElement;
    pathInput.type = "text";
    pathInput.placeholder = "...or a server-side path";
    pathInput.dataset.slotPath = slot;
    const bound = binding.slots[slot];
    if (bound?.kind === "path") pathInput.value = bound.path;
    pathInput.addEventListener("change", () => handlers.bindPath(slot, pathInput.value));
    row.appendChild(pathInput);

    const status = binding.slots[slot];
    row.appendChild(
      el(
        "span",
        status ? "slot-status ok" : "slot-status",
        status
          ? status.kind === "file"
            ? `file: ${status.file.name}`
            : `path: ${status.path}`
          : "unbound",
      ),
    );
    panel.appendChild(row);
  }

  if (binding.assistant.id === "semantic-type") {
    const row = el("div", "slot-row");
    row.appendChild(el("label", "slot-name", "gazetteer"));
    const input = el("input", "path-input") as HTMLInputElement;
    input.type = "text";
    input.placeholder = "server-side type<TAB>value file";
    input.dataset.config = "gazetteer";
    input.value = binding.gazetteerPath;
    input.addEventListener("change", () => handlers.setGazetteer(input.value));
    row.appendChild(input);
    panel.appendChild(row);
  }
  if (["type-infer", "semantic-type", "outlier"].includes(binding.assistant.id)) {
    const row = el("div", "slot-row");
    row.appendChild(el("label", "slot-name", "column"));
    const input = el("input", "path-input") as HTMLInputElement;
    input.type = "text";
    input.placeholder = "name or 1-based index (optional)";
    input.dataset.config = "column";
    input.value = binding.column;
    input.addEventListener("change", () => handlers.setColumn(input.value));
    row.appendChild(input);
    panel.appendChild(row);
  }

  const create = el("button", "primary", busy ? "creating..." : "Create session") as HTMLButtonElement;
  create.dataset.action = "create";
  create.disabled = busy || !requiredSlotsFilled(binding);
  create.addEventListener("click", () => handlers.createSession());
  panel.appendChild(create);
  return panel;
}

function renderSession(
  resource: SessionResource,
  busy: boolean,
  notice: string | null,
  resultCsv: string | null,
  handlers: Handlers,
): HTMLElement {
  const panel = el("section", "session");
  const heading = el("div", "session-heading");
  heading.appendChild(el("h2", undefined, resource.assistant));
  heading.appendChild(el("span", `status status-${resource.status}`, resource.status));
  panel.appendChild(heading);

  if (notice) panel.appendChild(el("p", "notice", notice));

  panel.appendChild(renderHistory(resource));
  panel.appendChild(renderScript(resource));
  panel.appendChild(renderPreview(resource));

  if (resource.status === "active") {
    panel.appendChild(renderChoices(resource, busy, handlers));
    const accept = el("button", "primary", busy ? "working..." : "Accept recommendation") as HTMLButtonElement;
    accept.dataset.action = "accept";
    accept.disabled = busy;
    accept.addEventListener("click", () => handlers.accept());
    panel.appendChild(accept);
  } else {
    const downloads = el("div", "downloads");
    const download = el("button", "primary", "Download cleaned CSV") as HTMLButtonElement;
    download.dataset.action = "download";
    download.addEventListener("click", () => handlers.downloadResult());
    downloads.appendChild(download);

    const script = el("a", "script-download", "expression script") as HTMLAnchorElement;
    script.href =
      "data:text/plain;charset=utf-8," + encodeURIComponent(resource.expression_script + "\n");
    script.setAttribute("download", `${resource.session_id}-script.txt`);
    downloads.appendChild(script);
    panel.appendChild(downloads);
    if (resultCsv !== null) {
      const box = el("pre", "result-box");
      box.dataset.role = "result-csv";
      box.textContent = resultCsv.split("\n").slice(0, 12).join("\n");
      panel.appendChild(box);
    }
  }

  const restart = el("button", "linkish", "Start over") as HTMLButtonElement;
  restart.dataset.action = "restart";
  restart.addEventListener("click", () => handlers.restart());
  panel.appendChild(restart);
  return panel;
}

function renderHistory(resource: SessionResource): HTMLElement {
  const wrap = el("div", "history");
  wrap.appendChild(el("span", "history-label", "constraints:"));
  if (resource.history.length === 0) {
    wrap.appendChild(el("span", "chip chip-empty", "none yet"));
  }
  // chips are append-only; the core has no undo, so neither do we
  resource.history.forEach((label, index) => {
    const chip = el("span", "chip", label);
    chip.dataset.chipIndex = String(index);
    wrap.appendChild(chip);
  });
  return wrap;
}

function renderScript(resource: SessionResource): HTMLElement {
  const box = el("pre", "script-box");
  box.dataset.role = "expression-script";
  box.textContent = resource.expression_script || "(empty expression)";
  return box;
}

function renderPreview(resource: SessionResource): HTMLElement {
  const container = el("div", "preview");
  const preview = resource.preview;
  if (!preview) {
    container.appendChild(el("p", "notice", "no preview available"));
    return container;
  }
  const diff = computeChangedCells(resource.input_preview, preview);
  const changed = changedCellCount(diff);

  const table = el("table", "preview-table");
  const head = el("thead");
  const headerRow = el("tr");
  preview.header.forEach((name, columnIndex) => {
    const cell = el("th");
    cell.appendChild(el("div", "col-name", name));
    const badge = preview.annotations?.[columnIndex];
    if (badge) {
      const badgeNode = el("div", "badge", badge);
      badgeNode.dataset.badgeColumn = String(columnIndex);
      cell.appendChild(badgeNode);
    }
    headerRow.appendChild(cell);
  });
  head.appendChild(headerRow);
  table.appendChild(head);

  const body = el("tbody");
  preview.rows.forEach((row, rowIndex) => {
    const rowNode = el("tr");
    row.forEach((value, columnIndex) => {
      const cell = el("td", undefined, value);
      if (diff[rowIndex]?.[columnIndex]) {
        cell.className = "changed";
      }
      rowNode.appendChild(cell);
    });
    body.appendChild(rowNode);
  });
  table.appendChild(body);
  container.appendChild(table);

  const meta = el("p", "preview-meta");
  meta.textContent =
    `showing ${preview.rows.length} preview row(s)` +
    (changed > 0 ? `, ${changed} changed cell(s) highlighted` : "");
  container.appendChild(meta);
  if (preview.rows.length >= 10) {
    container.appendChild(el("p", "notice", "preview truncated to the first rows"));
  }
  return container;
}

function renderChoices(
  resource: SessionResource,
  busy: boolean,
  handlers: Handlers,
): HTMLElement {
  const wrap = el("div", "choices");
  wrap.appendChild(el("h3", undefined, "Refine"));
  if (resource.choices.length === 0) {
    wrap.appendChild(el("p", "notice", "no refinements to offer"));
    return wrap;
  }
  const list = el("ol", "choice-list");
  resource.choices.forEach((choice, position) => {
    const item = el("li");
    const button = el(
      "button",
      position === 0 ? "choice choice-top" : "choice",
      choice.label,
    ) as HTMLButtonElement;
    button.dataset.choiceIndex = String(choice.index);
    button.disabled = busy;
    button.addEventListener("click", () => handlers.selectChoice(choice.index));
    item.appendChild(button);
    list.appendChild(item);
  });
  wrap.appendChild(list);
  return wrap;
}
