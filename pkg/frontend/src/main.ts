/**
 * Browser entry point: wires the workbench panels together.
 *
 * All reasoning lives in the pure modules (sourcemap, tree, properties,
 * history, preview); this file only builds DOM, forwards clicks to the API
 * client, and repaints. State is whatever the server last said — every
 * mutation round-trips and repaints from the response.
 */

import {
  ApiError,
  WorkbenchClient,
  type DocumentPayload,
  type EffectNode,
  type HistoryEntry,
  type InterfaceNode,
  type RenderPayload,
} from "./api.js";
import { historyRows, previousOrdinal } from "./history.js";
import { indexPreview, parseMockdeskPreview, type MockdeskNode } from "./preview.js";
import { inspectorRows } from "./properties.js";
import { highlightFromSource, tableFor, type GeneratedToSource } from "./sourcemap.js";
import {
  findPart,
  listenedEvents,
  structureById,
  structureChoices,
  structureRows,
} from "./tree.js";

const client = new WorkbenchClient("");

interface WorkbenchState {
  doc: DocumentPayload | null;
  render: RenderPayload | null;
  table: GeneratedToSource;
  selected: string | null;
  effects: string[];
}

const state: WorkbenchState = {
  doc: null,
  render: null,
  table: {},
  selected: null,
  effects: [],
};

// ---------------------------------------------------------------------------
// tiny DOM helpers

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (name === "class") node.className = value;
    else node.setAttribute(name, value);
  }
  node.append(...children);
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`workbench shell is missing #${id}`);
  return node as T;
}

function clear(node: HTMLElement): void {
  node.replaceChildren();
}

// ---------------------------------------------------------------------------
// status strip

function showStatus(message: string, isError: boolean): void {
  const strip = byId("status");
  strip.textContent = message;
  strip.className = isError ? "status error" : "status";
}

function reportError(context: string, error: unknown): void {
  if (error instanceof ApiError) {
    const where = error.location ? ` at ${error.location.line}:${error.location.column}` : "";
    showStatus(`${context}: ${error.code}${where} — ${error.message}`, true);
  } else {
    showStatus(`${context}: ${String(error)}`, true);
  }
}

// ---------------------------------------------------------------------------
// parameter controls

function currentInterface(): InterfaceNode | null {
  return state.doc?.tree.interfaces[0] ?? null;
}

function fillSelect(
  select: HTMLSelectElement,
  options: { value: string; label: string }[],
  selectedValue: string | null,
  defaultLabel: string,
): void {
  clear(select);
  select.append(el("option", { value: "" }, defaultLabel));
  for (const option of options) {
    select.append(el("option", { value: option.value }, option.label));
  }
  select.value = selectedValue ?? "";
}

function paintControls(): void {
  if (state.doc === null) return;
  const { tree, params } = state.doc;
  const iface = currentInterface();
  byId<HTMLSelectElement>("target-select").value = params.target;
  fillSelect(
    byId<HTMLSelectElement>("style-select"),
    (iface?.styles ?? []).map((s) => ({ value: s.id, label: s.id })),
    params.style,
    "style: default",
  );
  fillSelect(
    byId<HTMLSelectElement>("content-select"),
    (iface?.contents ?? []).map((c) => ({ value: c.id, label: c.id })),
    params.content,
    "content: default",
  );
  fillSelect(
    byId<HTMLSelectElement>("structure-select"),
    structureChoices(tree).map((c) => ({
      value: c.structureId,
      label: `${c.structureId} (${c.partCount} parts)`,
    })),
    params.structure,
    "structure: default",
  );
  byId("doc-name").textContent = tree.name ?? "(unnamed document)";
}

function paintDiagnostics(): void {
  if (state.doc === null) return;
  const list = byId("diagnostics");
  clear(list);
  for (const d of state.doc.diagnostics) {
    list.append(
      el(
        "li",
        { class: d.severity },
        `${d.severity} ${d.code} ${d.location.line}:${d.location.column} ${d.message}`,
      ),
    );
  }
  byId("diagnostics-count").textContent = String(state.doc.diagnostics.length);
}

// ---------------------------------------------------------------------------
// tree panel

function paintTree(): void {
  const panel = byId("tree");
  clear(panel);
  if (state.doc === null) return;
  const structure = structureById(state.doc.tree, state.doc.params.structure);
  if (structure === null) return;
  for (const row of structureRows(structure)) {
    const node = el(
      "div",
      {
        class: row.name === state.selected ? "tree-row selected" : "tree-row",
        "data-part": row.name,
        style: `padding-left: ${row.depth * 1.1 + 0.4}rem`,
        title: `line ${row.line}`,
      },
      el("span", { class: "part-name" }, row.name),
      el("span", { class: "part-class" }, row.partClass),
    );
    node.addEventListener("click", () => selectPart(row.name, "tree"));
    panel.append(node);
  }
}

// ---------------------------------------------------------------------------
// preview panel

function mockdeskNodeDom(node: MockdeskNode): HTMLElement {
  const props = Object.entries(node.props)
    .map(([k, v]) => `${k}=${v}`)
    .join("  ");
  const header = el(
    "div",
    { class: "md-header" },
    el("span", { class: "md-class" }, node.class),
    el("span", { class: "md-name" }, node.name),
    props ? el("span", { class: "md-props" }, props) : "",
  );
  const box = el(
    "div",
    { class: "md-node", "data-uiml-part": node.name, "data-uiml-src": node.src },
    header,
  );
  for (const child of node.children) box.append(mockdeskNodeDom(child));
  return box;
}

function previewRoot(): Document | HTMLElement | null {
  if (state.render === null) return null;
  if (state.render.target === "mockdesk") return byId("preview-mockdesk");
  return byId<HTMLIFrameElement>("preview-frame").contentDocument;
}

function attachPreviewClicks(root: Document | HTMLElement): void {
  root.addEventListener("click", (event) => {
    // No instanceof here: nodes inside the preview iframe belong to another
    // realm, whose Element constructor is not ours.
    const target = event.target as Element | null;
    const hit = target?.closest?.("[data-uiml-src]") ?? null;
    if (hit !== null) {
      event.preventDefault();
      const src = hit.getAttribute("data-uiml-src");
      if (src !== null) selectPart(src, "preview");
    }
  });
}

function paintPreview(): Promise<void> {
  const frame = byId<HTMLIFrameElement>("preview-frame");
  const mockdesk = byId("preview-mockdesk");
  if (state.render === null) {
    frame.hidden = true;
    mockdesk.hidden = true;
    return Promise.resolve();
  }
  if (state.render.target === "mockdesk") {
    frame.hidden = true;
    mockdesk.hidden = false;
    clear(mockdesk);
    for (const root of parseMockdeskPreview(state.render.text)) {
      mockdesk.append(mockdeskNodeDom(root));
    }
    return Promise.resolve();
  }
  mockdesk.hidden = true;
  frame.hidden = false;
  return new Promise((resolve) => {
    frame.addEventListener(
      "load",
      () => {
        const doc = frame.contentDocument;
        if (doc !== null) {
          doc.head.append(
            el(
              "style",
              {},
              ".uiml-selected { outline: 2px solid #d9632a; background: #fff3e8; }",
            ),
          );
          attachPreviewClicks(doc);
        }
        resolve();
      },
      { once: true },
    );
    frame.srcdoc = state.render!.text;
  });
}

function paintHighlight(): void {
  const root = previewRoot();
  if (root === null) return;
  for (const node of root.querySelectorAll(".uiml-selected")) {
    node.classList.remove("uiml-selected");
  }
  if (state.selected === null) return;
  const marked: Element[] = [];
  const mark = (selector: string): void => {
    for (const node of root.querySelectorAll(selector)) {
      node.classList.add("uiml-selected");
      marked.push(node);
    }
  };
  // Every element derived from the selected source part…
  mark(`[data-uiml-src="${CSS.escape(state.selected)}"]`);
  // …plus the generated names themselves, which covers platform documents
  // rendered with identity annotations.
  for (const name of highlightFromSource(state.table, state.selected).generated) {
    mark(`[data-uiml-part="${CSS.escape(name)}"]`);
  }
  marked[0]?.scrollIntoView({ block: "nearest" });
}

// ---------------------------------------------------------------------------
// inspector panel

function paintInspector(): void {
  const panel = byId("inspector");
  clear(panel);
  const iface = currentInterface();
  if (state.doc === null || iface === null || state.selected === null) {
    panel.append(el("p", { class: "hint" }, "Select a part in the tree or preview."));
    return;
  }
  const structure = structureById(state.doc.tree, state.doc.params.structure);
  const part = structure !== null ? findPart(structure, state.selected) : null;
  if (part === null) {
    panel.append(el("p", { class: "hint" }, `${state.selected} is not in this structure.`));
    return;
  }
  panel.append(
    el(
      "h3",
      {},
      el("span", { class: "part-name" }, part.name),
      " ",
      el("span", { class: "part-class" }, part.class),
    ),
  );
  const mapped = highlightFromSource(state.table, part.name).generated;
  if (mapped.length > 0) {
    panel.append(el("p", { class: "hint" }, `renders as: ${mapped.join(", ")}`));
  }
  const rows = inspectorRows(iface, state.doc.params.style, part.name, part.class);
  const table = el("table", { class: "props" });
  table.append(
    el("tr", {}, el("th", {}, "property"), el("th", {}, "value"), el("th", {}, "from")),
  );
  for (const row of rows) {
    const origin = row.fromClass ? `${row.styleId} (class)` : row.styleId;
    const tr = el(
      "tr",
      {},
      el("td", {}, row.prop),
      el("td", {}, row.value),
      el("td", { class: "hint" }, origin),
    );
    tr.addEventListener("click", () => {
      byId<HTMLInputElement>("prop-name").value = row.prop;
      byId<HTMLInputElement>("prop-value").value = row.value;
    });
    table.append(tr);
  }
  panel.append(table);
}

async function submitProperty(event: Event): Promise<void> {
  event.preventDefault();
  if (state.selected === null) {
    showStatus("select a part before editing properties", true);
    return;
  }
  const prop = byId<HTMLInputElement>("prop-name").value.trim();
  const value = byId<HTMLInputElement>("prop-value").value;
  if (prop === "") {
    showStatus("property name is required", true);
    return;
  }
  try {
    await client.setProperty(state.selected, prop, value);
    showStatus(`set ${state.selected}.${prop}`, false);
    await refreshAll();
  } catch (error) {
    reportError("property edit", error);
  }
}

// ---------------------------------------------------------------------------
// events panel

function effectLine(effect: EffectNode): string {
  switch (effect.kind) {
    case "set-property": {
      const was = effect.old === null ? "unset" : effect.old;
      return `set-property ${effect.part} ${effect.prop} ${effect.new} (was ${was})`;
    }
    case "call":
      return ["call", effect.function, ...effect.args].join(" ");
    case "fire-event":
      return `fire-event ${effect.part} ${effect.event}`;
    case "restructure":
      return `restructure ${effect.structure}`;
  }
}

function paintEvents(): void {
  if (state.doc === null) return;
  const select = byId<HTMLSelectElement>("event-select");
  clear(select);
  for (const choice of listenedEvents(state.doc.tree)) {
    const hint = choice.dataNames.length > 0 ? ` [${choice.dataNames.join(", ")}]` : "";
    select.append(
      el(
        "option",
        { value: `${choice.part} ${choice.event}` },
        `${choice.part} ${choice.event}${hint}`,
      ),
    );
  }
  const log = byId("effects-log");
  clear(log);
  for (const line of state.effects) log.append(el("li", {}, line));
}

async function fireEvent(event: Event): Promise<void> {
  event.preventDefault();
  const pair = byId<HTMLSelectElement>("event-select").value;
  if (pair === "") return;
  const [part, eventClass] = pair.split(" ") as [string, string];
  const dataText = byId<HTMLInputElement>("event-data").value.trim();
  let data: Record<string, string> = {};
  if (dataText !== "") {
    try {
      data = JSON.parse(dataText) as Record<string, string>;
    } catch {
      showStatus("event data must be a JSON object", true);
      return;
    }
  }
  try {
    const result = await client.sendEvent(part, eventClass, data);
    const lines = result.effects.map(effectLine);
    state.effects.push(`» ${part} ${eventClass}`, ...(lines.length > 0 ? lines : ["(no rule matched)"]));
    paintEvents();
    showStatus(`dispatched ${part} ${eventClass}`, false);
  } catch (error) {
    reportError("event", error);
  }
}

// ---------------------------------------------------------------------------
// history panel

async function paintHistory(): Promise<void> {
  try {
    const { entries } = await client.history();
    const list = byId("history");
    clear(list);
    for (const row of historyRows(entries)) {
      const button = el("button", { type: "button" }, "restore");
      button.addEventListener("click", () => void restoreSnapshot(row.ordinal));
      const item = el(
        "li",
        { class: row.current ? "current" : "" },
        el("span", { class: "ordinal" }, `#${row.ordinal}`),
        el("span", { class: "label" }, row.label),
        el("span", { class: "time" }, row.time),
        row.rendered ? "" : el("span", { class: "error" }, "render failed"),
        row.current ? el("span", { class: "hint" }, "current") : button,
      );
      list.append(item);
    }
    const back = byId<HTMLButtonElement>("undo-button");
    const target = previousOrdinal(entries);
    back.disabled = target === null;
    back.onclick = target === null ? null : () => void restoreSnapshot(target);
  } catch (error) {
    reportError("history", error);
  }
}

async function restoreSnapshot(ordinal: number): Promise<void> {
  try {
    await client.restore(ordinal);
    showStatus(`restored snapshot #${ordinal}`, false);
    await refreshAll();
  } catch (error) {
    reportError("restore", error);
  }
}

// ---------------------------------------------------------------------------
// document text panel

async function applyDocumentText(event: Event): Promise<void> {
  event.preventDefault();
  const text = byId<HTMLTextAreaElement>("doc-text").value;
  try {
    await client.putDocument(text);
    showStatus("document replaced", false);
    await refreshAll();
  } catch (error) {
    reportError("document edit", error);
  }
}

// ---------------------------------------------------------------------------
// selection + refresh

function selectPart(name: string, origin: "tree" | "preview"): void {
  state.selected = name;
  paintTree();
  paintInspector();
  paintHighlight();
  if (origin === "preview") {
    byId("tree")
      .querySelector(`[data-part="${CSS.escape(name)}"]`)
      ?.scrollIntoView({ block: "nearest" });
  }
}

async function renderPreview(): Promise<void> {
  if (state.doc === null) return;
  try {
    state.render = await client.render(state.doc.params);
    state.table = state.render.source_map !== null ? tableFor(state.render.source_map) : {};
    await paintPreview();
    paintHighlight();
    const index = indexPreview(state.render.target, state.render.text);
    byId("preview-stats").textContent =
      `${Object.keys(index.srcOf).length} rendered parts / ` +
      `${Object.keys(index.partsBySrc).length} source parts`;
    showStatus(`rendered ${state.render.target}`, false);
  } catch (error) {
    state.render = null;
    await paintPreview();
    reportError("render", error);
  }
}

async function refreshAll(): Promise<void> {
  state.doc = await client.getDocument();
  byId<HTMLTextAreaElement>("doc-text").value = state.doc.text;
  if (state.selected !== null) {
    const structure = structureById(state.doc.tree, state.doc.params.structure);
    if (structure === null || findPart(structure, state.selected) === null) {
      state.selected = null;
    }
  }
  paintControls();
  paintDiagnostics();
  paintTree();
  paintInspector();
  paintEvents();
  await renderPreview();
  await paintHistory();
}

async function applyParams(): Promise<void> {
  if (state.doc === null) return;
  const pick = (id: string): string | null => {
    const value = byId<HTMLSelectElement>(id).value;
    return value === "" ? null : value;
  };
  state.doc.params = {
    target: byId<HTMLSelectElement>("target-select").value,
    style: pick("style-select"),
    content: pick("content-select"),
    structure: pick("structure-select"),
  };
  paintTree();
  await renderPreview();
  await paintHistory();
}

function wireUp(): void {
  // The mockdesk container persists across repaints; delegate clicks once.
  // (The html preview re-attaches per load because each srcdoc is a new
  // document.)
  attachPreviewClicks(byId("preview-mockdesk"));
  byId("render-button").addEventListener("click", () => void applyParams());
  for (const id of ["target-select", "style-select", "content-select", "structure-select"]) {
    byId(id).addEventListener("change", () => void applyParams());
  }
  byId("prop-form").addEventListener("submit", (e) => void submitProperty(e));
  byId("event-form").addEventListener("submit", (e) => void fireEvent(e));
  byId("doc-form").addEventListener("submit", (e) => void applyDocumentText(e));
  byId("reload-button").addEventListener("click", () => void refreshAll());
}

wireUp();
void refreshAll().catch((error) => reportError("load", error));
