import { describe, expect, it } from "vitest";
import type { MenuDraft, MenuNode } from "../src/types";
import { deriveTasks, taskPrompt, validateDraft } from "../src/draft";
import { reorderNode } from "../src/tree";

function node(id: number, label: string, children: MenuNode[] = []): MenuNode {
  return { id, label, children };
}

function draftFixture(): MenuDraft {
  return {
    name: "demo",
    roots: [
      node(1, "sport", [
        node(2, "cycling", [node(3, "dune cycling"), node(4, "road cycling")]),
        node(5, "swimming", [node(6, "backstroke")]),
      ]),
      node(7, "food"),
    ],
    targets: [2, 3],
  };
}

describe("validateDraft", () => {
  it("accepts the fixture", () => {
    expect(validateDraft(draftFixture())).toEqual([]);
  });

  it("flags empty labels with the node id", () => {
    const draft = draftFixture();
    draft.roots[0].children[1].label = "   ";
    const issues = validateDraft(draft);
    expect(issues).toHaveLength(1);
    expect(issues[0].nodeId).toBe(5);
    expect(issues[0].message).toContain("empty label");
  });

  it("flags reserved characters in labels", () => {
    const draft = draftFixture();
    draft.roots[1].label = "fast|slow";
    expect(validateDraft(draft)[0].message).toContain("|");
  });

  it("flags duplicate sibling labels but allows repeats across levels", () => {
    const draft = draftFixture();
    draft.roots[0].children[1].label = "cycling";
    const issues = validateDraft(draft);
    expect(issues).toHaveLength(1);
    expect(issues[0].message).toContain("duplicate");

    const ok = draftFixture();
    ok.roots[1].label = "cycling"; // different level, fine
    expect(validateDraft(ok)).toEqual([]);
  });

  it("requires at least one task", () => {
    const draft = { ...draftFixture(), targets: [] };
    expect(validateDraft(draft)[0].message).toContain("no tasks");
  });

  it("rejects targets at depth 1 and missing targets", () => {
    const depth1 = { ...draftFixture(), targets: [1] };
    expect(validateDraft(depth1)[0].message).toContain("depth 1");
    const gone = { ...draftFixture(), targets: [99] };
    expect(validateDraft(gone)[0].message).toContain("no longer exists");
  });

  it("rejects targets deeper than 3", () => {
    const draft = draftFixture();
    draft.roots[0].children[0].children[0].children = [node(8, "deep")];
    draft.targets = [8];
    expect(validateDraft(draft)[0].message).toContain("depth 4");
  });
});

describe("deriveTasks", () => {
  it("builds one task per target with sibling items at each level", () => {
    const tasks = deriveTasks(draftFixture());
    expect(tasks).toHaveLength(2);
    expect(tasks[0].levels).toEqual([
      { items: ["sport", "food"], target_index: 0 },
      { items: ["cycling", "swimming"], target_index: 0 },
    ]);
    expect(tasks[1].levels).toEqual([
      { items: ["sport", "food"], target_index: 0 },
      { items: ["cycling", "swimming"], target_index: 0 },
      { items: ["dune cycling", "road cycling"], target_index: 0 },
    ]);
  });

  it("moves target_index when siblings are reordered", () => {
    const draft = draftFixture();
    const before = deriveTasks(draft)[1].levels[2].target_index;
    expect(before).toBe(0);
    const r = reorderNode(draft.roots, 3, 1);
    expect(r.ok).toBe(true);
    const moved = { ...draft, roots: r.nodes };
    const after = deriveTasks(moved)[1];
    expect(after.levels[2].items).toEqual(["road cycling", "dune cycling"]);
    expect(after.levels[2].target_index).toBe(1);
  });

  it("renders display prompts from the path labels", () => {
    expect(taskPrompt(draftFixture(), 3)).toBe("sport / cycling / dune cycling");
    expect(taskPrompt(draftFixture(), 99)).toBe("(missing)");
  });
});
