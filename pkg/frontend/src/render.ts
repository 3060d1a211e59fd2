import type { MenuNode } from "./types";
import type { DraftSlot, SlotName, Workbench } from "./store";
import { taskPrompt } from "./draft";
import { predictionChart } from "./chart";

/** Round only here; state keeps the exact service values. */
export function formatValue(v: number): string {
  return v.toFixed(3);
}

/** Mount the workbench UI under root and keep it in sync with the store. */
export function renderApp(root: HTMLElement, wb: Workbench): void {
  const repaint = () => {
    root.textContent = "";
    root.appendChild(buildPage(wb));
  };
  wb.subscribe(repaint);
  repaint();
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function buildPage(wb: Workbench): HTMLElement {
  const page = el("div", { class: "workbench" });

  if (wb.banner !== null) {
    const banner = el("div", { class: "banner", role: "alert" }, wb.banner);
    page.appendChild(banner);
  }

  page.appendChild(profilePanel(wb));

  const drafts = el("div", { class: "drafts" });
  drafts.appendChild(slotPanel(wb, "a"));
  if (wb.slots.b) {
    drafts.appendChild(slotPanel(wb, "b"));
    const stop = el("button", { class: "compare-toggle" }, "Close comparison");
    stop.addEventListener("click", () => wb.disableComparison());
    page.appendChild(stop);
  } else {
    const start = el("button", { class: "compare-toggle" }, "Compare a variant");
    start.addEventListener("click", () => wb.enableComparison());
    page.appendChild(start);
  }
  page.appendChild(drafts);
  return page;
}

function profilePanel(wb: Workbench): HTMLElement {
  const panel = el("fieldset", { class: "profile" });
  panel.appendChild(el("legend", {}, "User profile (WAIS-IV)"));
  const rows: Array<{ key: "symbolSearch" | "symbolCoding"; label: string; max: number }> = [
    { key: "symbolSearch", label: "Symbol search", max: 63 },
    { key: "symbolCoding", label: "Symbol coding", max: 135 },
  ];
  for (const row of rows) {
    const wrap = el("label", { class: "slider" });
    wrap.appendChild(el("span", {}, `${row.label} (${wb.profile[row.key]}/${row.max})`));
    const slider = el("input", {
      type: "range",
      min: "0",
      max: String(row.max),
      value: String(wb.profile[row.key]),
      "data-profile": row.key,
    });
    slider.addEventListener("input", () => {
      wb.setProfile({ [row.key]: Number(slider.value) });
    });
    wrap.appendChild(slider);
    panel.appendChild(wrap);
  }
  return panel;
}

function slotPanel(wb: Workbench, name: SlotName): HTMLElement {
  const held = wb.slots[name];
  if (!held) return el("div");
  const panel = el("section", { class: "draft-panel", "data-slot": name });
  panel.appendChild(el("h2", {}, held.draft.name));
  panel.appendChild(treeEditor(wb, name, held.draft.roots));

  const addRoot = el("button", { class: "add-root" }, "+ top-level item");
  addRoot.addEventListener("click", () => {
    reportIfBlocked(wb.edit(name, { kind: "add", parentId: null, label: "new item" }));
  });
  panel.appendChild(addRoot);

  if (held.issues.length > 0) {
    const list = el("ul", { class: "issues" });
    for (const issue of held.issues) {
      list.appendChild(el("li", { class: "issue" }, issue.message));
    }
    panel.appendChild(list);
  }

  panel.appendChild(taskPanel(wb, name, held));
  return panel;
}

function treeEditor(wb: Workbench, name: SlotName, nodes: MenuNode[]): HTMLElement {
  const list = el("ul", { class: "tree" });
  nodes.forEach((node, i) => {
    const row = el("li", { "data-node": String(node.id) });

    const label = el("input", { type: "text", value: node.label, class: "node-label" });
    label.addEventListener("input", () => {
      reportIfBlocked(wb.edit(name, { kind: "rename", id: node.id, label: label.value }));
    });
    row.appendChild(label);

    const controls: Array<[string, () => string | null]> = [
      ["+", () => wb.edit(name, { kind: "add", parentId: node.id, label: "new item" })],
      ["up", () => wb.edit(name, { kind: "reorder", id: node.id, delta: -1 })],
      ["down", () => wb.edit(name, { kind: "reorder", id: node.id, delta: 1 })],
      ["task", () => wb.edit(name, { kind: "addTask", targetId: node.id })],
      ["x", () => wb.edit(name, { kind: "delete", id: node.id })],
    ];
    for (const [text, run] of controls) {
      const btn = el("button", { class: `node-${text}` }, text);
      btn.addEventListener("click", () => reportIfBlocked(run()));
      row.appendChild(btn);
    }
    if (i === nodes.length - 1) row.classList.add("last");
    if (node.children.length > 0) row.appendChild(treeEditor(wb, name, node.children));
    list.appendChild(row);
  });
  return list;
}

function taskPanel(wb: Workbench, name: SlotName, held: DraftSlot): HTMLElement {
  const panel = el("div", { class: "tasks" });
  panel.appendChild(el("h3", {}, "Tasks"));
  const table = el("table", { class: "task-table" });
  const head = el("tr");
  for (const h of ["#", "target path", "CE", "PT", ""]) head.appendChild(el("th", {}, h));
  table.appendChild(head);

  held.draft.targets.forEach((targetId, i) => {
    const row = el("tr", { "data-task": String(i) });
    row.appendChild(el("td", {}, String(i + 1)));
    row.appendChild(el("td", {}, taskPrompt(held.draft, targetId)));
    const pred = held.view?.series[i];
    row.appendChild(el("td", { class: "ce-cell" }, pred ? formatValue(pred.ce) : "-"));
    row.appendChild(el("td", { class: "pt-cell" }, pred ? formatValue(pred.pt) : "-"));
    const drop = el("button", { class: "task-remove" }, "remove");
    drop.addEventListener("click", () => {
      reportIfBlocked(wb.edit(name, { kind: "removeTask", taskIndex: i }));
    });
    const cell = el("td");
    cell.appendChild(drop);
    row.appendChild(cell);
    table.appendChild(row);
  });
  panel.appendChild(table);

  if (held.view) {
    panel.appendChild(
      el("p", { class: "cumulative-ce" }, `Cumulative CE: ${formatValue(held.view.cumulativeCe)}`),
    );
    panel.appendChild(predictionChart(held.view));
  }
  return panel;
}

function reportIfBlocked(reason: string | null): void {
  if (reason !== null && typeof window !== "undefined" && "alert" in window) {
    window.alert(reason);
  }
}
