import type {
  DraftIssue,
  MenuDraft,
  PredictionView,
  PredictRequestBody,
  WaisProfile,
} from "./types";
import { PredictClient, type FetchLike } from "./client";
import { addNode, cloneNodes, deleteNode, renameNode, reorderNode } from "./tree";
import { deriveTasks, validateDraft } from "./draft";

export type SlotName = "a" | "b";

export interface DraftSlot {
  draft: MenuDraft;
  issues: DraftIssue[];
  /** Last good prediction; kept when the service is unreachable. */
  view: PredictionView | null;
}

export interface WorkbenchOptions {
  model: string;
  initialDraft: MenuDraft;
  baseUrl?: string;
  fetchFn?: FetchLike;
  debounceMs?: number;
}

const WAIS_MAX = { symbolSearch: 63, symbolCoding: 135 };

/**
 * Single-page state store for the workbench: one editable draft, an optional
 * comparison draft, a WAIS profile, and the live prediction view per draft.
 *
 * Every edit revalidates its draft. A valid draft schedules a debounced
 * /predict request; an invalid draft cancels any pending request instead, so
 * no request is ever issued for an invalid draft. Responses come back through
 * a per-slot sequence guard and replace that slot's view wholesale; values in
 * the view are exactly the response values, never rounded in state.
 */
export class Workbench {
  model: string;
  profile: WaisProfile = { symbolSearch: 32, symbolCoding: 68 };
  banner: string | null = null;
  slots: { a: DraftSlot; b: DraftSlot | null };

  private clients: { a: PredictClient; b: PredictClient };
  private listeners: Array<() => void> = [];

  constructor(options: WorkbenchOptions) {
    this.model = options.model;
    this.slots = {
      a: { draft: options.initialDraft, issues: validateDraft(options.initialDraft), view: null },
      b: null,
    };
    const mkClient = (slot: SlotName) =>
      new PredictClient({
        baseUrl: options.baseUrl,
        fetchFn: options.fetchFn,
        debounceMs: options.debounceMs,
        onResult: (body) => {
          const held = this.slots[slot];
          if (!held) return;
          held.view = {
            series: body.predictions,
            cumulativeCe: body.predictions.reduce((acc, p) => acc + p.ce, 0),
          };
          this.banner = null;
          this.notify();
        },
        onError: (message) => {
          this.banner = message;
          this.notify();
        },
      });
    this.clients = { a: mkClient("a"), b: mkClient("b") };
    this.afterChange("a");
  }

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  slot(name: SlotName): DraftSlot | null {
    return this.slots[name];
  }

  /** Apply a tree edit to a slot; returns the blocking reason if refused. */
  edit(
    name: SlotName,
    action:
      | { kind: "add"; parentId: number | null; label: string }
      | { kind: "rename"; id: number; label: string }
      | { kind: "delete"; id: number }
      | { kind: "reorder"; id: number; delta: -1 | 1 }
      | { kind: "addTask"; targetId: number }
      | { kind: "removeTask"; taskIndex: number },
  ): string | null {
    const held = this.slots[name];
    if (!held) return "comparison slot is not enabled";
    const draft = held.draft;
    switch (action.kind) {
      case "add": {
        const r = addNode(draft.roots, action.parentId, action.label);
        if (!r.ok) return r.reason ?? "edit refused";
        held.draft = { ...draft, roots: r.nodes };
        break;
      }
      case "rename": {
        const r = renameNode(draft.roots, action.id, action.label);
        if (!r.ok) return r.reason ?? "edit refused";
        held.draft = { ...draft, roots: r.nodes };
        break;
      }
      case "delete": {
        const r = deleteNode(draft.roots, action.id, draft.targets);
        if (!r.ok) return r.reason ?? "edit refused";
        held.draft = { ...draft, roots: r.nodes };
        break;
      }
      case "reorder": {
        const r = reorderNode(draft.roots, action.id, action.delta);
        if (!r.ok) return r.reason ?? "edit refused";
        held.draft = { ...draft, roots: r.nodes };
        break;
      }
      case "addTask": {
        held.draft = { ...draft, targets: [...draft.targets, action.targetId] };
        break;
      }
      case "removeTask": {
        if (action.taskIndex < 0 || action.taskIndex >= draft.targets.length) {
          return "no such task";
        }
        const targets = draft.targets.filter((_, i) => i !== action.taskIndex);
        held.draft = { ...draft, targets };
        break;
      }
    }
    this.afterChange(name);
    this.notify();
    return null;
  }

  /** Update the WAIS profile (clamped to slider ranges) and refresh all drafts. */
  setProfile(update: Partial<WaisProfile>): void {
    const merged = { ...this.profile, ...update };
    this.profile = {
      symbolSearch: clamp(merged.symbolSearch, 0, WAIS_MAX.symbolSearch),
      symbolCoding: clamp(merged.symbolCoding, 0, WAIS_MAX.symbolCoding),
    };
    this.afterChange("a");
    if (this.slots.b) this.afterChange("b");
    this.notify();
  }

  /** Copy the primary draft into the comparison slot. */
  enableComparison(): void {
    if (this.slots.b) return;
    const source = this.slots.a.draft;
    const draft: MenuDraft = {
      name: `${source.name} (variant)`,
      roots: cloneNodes(source.roots),
      targets: [...source.targets],
    };
    this.slots.b = { draft, issues: validateDraft(draft), view: null };
    this.afterChange("b");
    this.notify();
  }

  disableComparison(): void {
    if (!this.slots.b) return;
    this.clients.b.cancel();
    this.slots.b = null;
    this.notify();
  }

  private afterChange(name: SlotName): void {
    const held = this.slots[name];
    if (!held) return;
    held.issues = validateDraft(held.draft);
    if (held.issues.length > 0) {
      this.clients[name].cancel();
      return;
    }
    const body: PredictRequestBody = {
      model: this.model,
      wais: {
        symbol_search: this.profile.symbolSearch,
        symbol_coding: this.profile.symbolCoding,
      },
      tasks: deriveTasks(held.draft),
    };
    this.clients[name].schedule(body);
  }
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, Math.round(value)));
}
