import type { DraftIssue, MenuDraft, MenuNode, TaskPayload } from "./types";
import { depthOf, pathTo } from "./tree";

// characters the service's label rules forbid
const FORBIDDEN = ["|", "\t", "\n"];

/**
 * Validate a draft against the service's task rules: non-empty labels
 * without reserved characters, unique sibling labels, every target present
 * at depth 2 or 3, and at least one task. Returns all problems found.
 */
export function validateDraft(draft: MenuDraft): DraftIssue[] {
  const issues: DraftIssue[] = [];
  checkLevel(draft.roots, "top level", issues);
  if (draft.targets.length === 0) {
    issues.push({ message: "draft has no tasks; mark at least one target" });
  }
  draft.targets.forEach((targetId, taskIndex) => {
    const depth = depthOf(draft.roots, targetId);
    if (depth === 0) {
      issues.push({ message: `task ${taskIndex + 1}: target node no longer exists`, taskIndex });
    } else if (depth !== 2 && depth !== 3) {
      issues.push({
        message: `task ${taskIndex + 1}: target sits at depth ${depth}, needs 2 or 3`,
        taskIndex,
        nodeId: targetId,
      });
    }
  });
  return issues;
}

function checkLevel(siblings: MenuNode[], where: string, issues: DraftIssue[]): void {
  const seen = new Map<string, number>();
  for (const node of siblings) {
    if (node.label.trim() === "") {
      issues.push({ message: `empty label under ${where}`, nodeId: node.id });
    } else {
      const bad = FORBIDDEN.find((ch) => node.label.includes(ch));
      if (bad !== undefined) {
        const shown = bad === "|" ? "|" : JSON.stringify(bad);
        issues.push({ message: `label "${node.label}" contains ${shown}`, nodeId: node.id });
      }
      if (seen.has(node.label)) {
        issues.push({ message: `duplicate sibling label "${node.label}" under ${where}`, nodeId: node.id });
      }
      seen.set(node.label, node.id);
    }
    checkLevel(node.children, `"${node.label}"`, issues);
  }
}

/**
 * Derive the service task payloads from a draft. Each target's root-to-node
 * path becomes one task; each level shows the path node's siblings in their
 * current order, so reordering siblings moves target_index accordingly.
 * Call only on a valid draft.
 */
export function deriveTasks(draft: MenuDraft): TaskPayload[] {
  return draft.targets.map((targetId) => {
    const path = pathTo(draft.roots, targetId);
    if (!path) throw new Error(`target node ${targetId} not in tree`);
    let siblings = draft.roots;
    const levels = path.map((node) => {
      const level = {
        items: siblings.map((n) => n.label),
        target_index: siblings.findIndex((n) => n.id === node.id),
      };
      siblings = node.children;
      return level;
    });
    return { levels };
  });
}

/** Human-readable prompt for one task, for display only. */
export function taskPrompt(draft: MenuDraft, targetId: number): string {
  const path = pathTo(draft.roots, targetId);
  return path ? path.map((n) => n.label).join(" / ") : "(missing)";
}
