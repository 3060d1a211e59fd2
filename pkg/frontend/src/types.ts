/** A node in the editable menu tree. */
export interface MenuNode {
  id: number;
  label: string;
  children: MenuNode[];
}

/**
 * An editable menu draft. `targets` is the ordered task list: each entry is
 * the id of the node whose root-to-node path is one selection task.
 */
export interface MenuDraft {
  name: string;
  roots: MenuNode[];
  targets: number[];
}

/** WAIS profile; symbol search 0..63, symbol coding 0..135. */
export interface WaisProfile {
  symbolSearch: number;
  symbolCoding: number;
}

/** One displayed menu level as the service expects it. */
export interface LevelPayload {
  items: string[];
  target_index: number;
}

/** One selection task as the service expects it. */
export interface TaskPayload {
  levels: LevelPayload[];
}

export interface PredictRequestBody {
  model: string;
  wais: { symbol_search: number; symbol_coding: number };
  tasks: TaskPayload[];
  history?: TaskPayload[];
}

export interface PredictResponseBody {
  model: string;
  predictions: { ce: number; pt: number }[];
}

/** A validation problem, anchored to a node or task when possible. */
export interface DraftIssue {
  message: string;
  nodeId?: number;
  taskIndex?: number;
}

/**
 * Per-task predicted values for one draft. Values are stored exactly as the
 * service returned them; rounding happens only at render time.
 */
export interface PredictionView {
  series: { ce: number; pt: number }[];
  cumulativeCe: number;
}
