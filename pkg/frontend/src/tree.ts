import type { MenuNode } from "./types";

/** Deep clone a node list. */
export function cloneNodes(nodes: MenuNode[]): MenuNode[] {
  return nodes.map((n) => ({ ...n, children: cloneNodes(n.children) }));
}

/** Find a node by id anywhere in the forest. */
export function findNode(nodes: MenuNode[], id: number): MenuNode | null {
  for (const node of nodes) {
    if (node.id === id) return node;
    const hit = findNode(node.children, id);
    if (hit) return hit;
  }
  return null;
}

export interface ParentContext {
  parent: MenuNode | null;
  siblings: MenuNode[];
  index: number;
}

/** Locate a node's sibling array and position; parent is null at top level. */
export function findParentContext(nodes: MenuNode[], id: number): ParentContext | null {
  for (let i = 0; i < nodes.length; i++) {
    if (nodes[i].id === id) return { parent: null, siblings: nodes, index: i };
  }
  for (const node of nodes) {
    const hit = findInChildren(node, id);
    if (hit) return hit;
  }
  return null;
}

function findInChildren(parent: MenuNode, id: number): ParentContext | null {
  for (let i = 0; i < parent.children.length; i++) {
    if (parent.children[i].id === id) {
      return { parent, siblings: parent.children, index: i };
    }
  }
  for (const child of parent.children) {
    const hit = findInChildren(child, id);
    if (hit) return hit;
  }
  return null;
}

/** Path of nodes from a root down to the node with this id, inclusive. */
export function pathTo(nodes: MenuNode[], id: number): MenuNode[] | null {
  for (const node of nodes) {
    if (node.id === id) return [node];
    const rest = pathTo(node.children, id);
    if (rest) return [node, ...rest];
  }
  return null;
}

/** 1-based depth of the node (roots are depth 1), or 0 if absent. */
export function depthOf(nodes: MenuNode[], id: number): number {
  const path = pathTo(nodes, id);
  return path ? path.length : 0;
}

/** Smallest id not yet used in the forest. */
export function nextId(nodes: MenuNode[]): number {
  let max = 0;
  const walk = (list: MenuNode[]) => {
    for (const n of list) {
      if (n.id > max) max = n.id;
      walk(n.children);
    }
  };
  walk(nodes);
  return max + 1;
}

/** Collect the ids of a node and all its descendants. */
export function subtreeIds(node: MenuNode): number[] {
  const ids = [node.id];
  for (const child of node.children) ids.push(...subtreeIds(child));
  return ids;
}

export interface EditResult {
  ok: boolean;
  nodes: MenuNode[];
  newNodeId?: number;
  reason?: string;
}

/** Add a child with the given label; parentId null adds a new root. */
export function addNode(nodes: MenuNode[], parentId: number | null, label: string): EditResult {
  const tree = cloneNodes(nodes);
  const id = nextId(tree);
  const child: MenuNode = { id, label, children: [] };
  if (parentId === null) {
    tree.push(child);
    return { ok: true, nodes: tree, newNodeId: id };
  }
  const parent = findNode(tree, parentId);
  if (!parent) return { ok: false, nodes, reason: `no node with id ${parentId}` };
  parent.children.push(child);
  return { ok: true, nodes: tree, newNodeId: id };
}

/** Rename a node. The new label may be invalid; validation flags it inline. */
export function renameNode(nodes: MenuNode[], id: number, label: string): EditResult {
  const tree = cloneNodes(nodes);
  const node = findNode(tree, id);
  if (!node) return { ok: false, nodes, reason: `no node with id ${id}` };
  node.label = label;
  return { ok: true, nodes: tree };
}

/**
 * Delete a node and its subtree. Refused when the subtree contains any node
 * on an active target path (ancestors of a target are on its path too).
 */
export function deleteNode(nodes: MenuNode[], id: number, targets: number[]): EditResult {
  const ctx = findParentContext(nodes, id);
  if (!ctx) return { ok: false, nodes, reason: `no node with id ${id}` };
  const doomed = new Set(subtreeIds(ctx.siblings[ctx.index]));
  for (const targetId of targets) {
    const path = pathTo(nodes, targetId);
    if (path && path.some((n) => doomed.has(n.id))) {
      const label = ctx.siblings[ctx.index].label;
      return {
        ok: false,
        nodes,
        reason: `cannot delete "${label}": it is on the target path of an active task`,
      };
    }
  }
  const tree = cloneNodes(nodes);
  const liveCtx = findParentContext(tree, id)!;
  liveCtx.siblings.splice(liveCtx.index, 1);
  return { ok: true, nodes: tree };
}

/** Move a node up or down among its siblings. */
export function reorderNode(nodes: MenuNode[], id: number, delta: -1 | 1): EditResult {
  const tree = cloneNodes(nodes);
  const ctx = findParentContext(tree, id);
  if (!ctx) return { ok: false, nodes, reason: `no node with id ${id}` };
  const j = ctx.index + delta;
  if (j < 0 || j >= ctx.siblings.length) {
    return { ok: false, nodes, reason: "already at the edge of its level" };
  }
  [ctx.siblings[ctx.index], ctx.siblings[j]] = [ctx.siblings[j], ctx.siblings[ctx.index]];
  return { ok: true, nodes: tree };
}
