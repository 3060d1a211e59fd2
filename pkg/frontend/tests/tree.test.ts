import { describe, expect, it } from "vitest";
import type { MenuNode } from "../src/types";
import {
  addNode,
  cloneNodes,
  deleteNode,
  depthOf,
  findNode,
  findParentContext,
  nextId,
  pathTo,
  renameNode,
  reorderNode,
  subtreeIds,
} from "../src/tree";

function fixture(): MenuNode[] {
  return [
    {
      id: 1,
      label: "sport",
      children: [
        {
          id: 2,
          label: "cycling",
          children: [
            { id: 3, label: "dune cycling", children: [] },
            { id: 4, label: "road cycling", children: [] },
          ],
        },
        { id: 5, label: "swimming", children: [] },
      ],
    },
    { id: 6, label: "food", children: [] },
  ];
}

describe("lookups", () => {
  it("finds nested nodes by id", () => {
    expect(findNode(fixture(), 4)?.label).toBe("road cycling");
    expect(findNode(fixture(), 99)).toBeNull();
  });

  it("locates parent context at top level and below", () => {
    const nodes = fixture();
    const top = findParentContext(nodes, 6);
    expect(top?.parent).toBeNull();
    expect(top?.index).toBe(1);
    const deep = findParentContext(nodes, 4);
    expect(deep?.parent?.label).toBe("cycling");
    expect(deep?.index).toBe(1);
  });

  it("computes paths and depths", () => {
    const nodes = fixture();
    expect(pathTo(nodes, 3)?.map((n) => n.label)).toEqual(["sport", "cycling", "dune cycling"]);
    expect(depthOf(nodes, 3)).toBe(3);
    expect(depthOf(nodes, 1)).toBe(1);
    expect(depthOf(nodes, 42)).toBe(0);
  });

  it("collects subtree ids and fresh ids", () => {
    const nodes = fixture();
    expect(subtreeIds(nodes[0].children[0])).toEqual([2, 3, 4]);
    expect(nextId(nodes)).toBe(7);
  });
});

describe("edits", () => {
  it("clones deeply so edits never alias the input", () => {
    const nodes = fixture();
    const copy = cloneNodes(nodes);
    copy[0].children[0].label = "changed";
    expect(nodes[0].children[0].label).toBe("cycling");
  });

  it("adds a child under a node and at the top level", () => {
    const nodes = fixture();
    const r1 = addNode(nodes, 2, "mountain biking");
    expect(r1.ok).toBe(true);
    expect(findNode(r1.nodes, r1.newNodeId!)?.label).toBe("mountain biking");
    expect(findParentContext(r1.nodes, r1.newNodeId!)?.parent?.label).toBe("cycling");
    const r2 = addNode(nodes, null, "travel");
    expect(r2.nodes.map((n) => n.label)).toContain("travel");
    expect(nodes[0].children[0].children).toHaveLength(2);
  });

  it("refuses to add under a missing parent", () => {
    const r = addNode(fixture(), 123, "ghost");
    expect(r.ok).toBe(false);
    expect(r.reason).toContain("123");
  });

  it("renames without touching the original", () => {
    const nodes = fixture();
    const r = renameNode(nodes, 5, "open water swimming");
    expect(findNode(r.nodes, 5)?.label).toBe("open water swimming");
    expect(findNode(nodes, 5)?.label).toBe("swimming");
  });

  it("deletes a leaf that is not on any target path", () => {
    const r = deleteNode(fixture(), 4, [3]);
    expect(r.ok).toBe(true);
    expect(findNode(r.nodes, 4)).toBeNull();
  });

  it("blocks deleting a node on an active target path, with an explanation", () => {
    const nodes = fixture();
    // 2 is an ancestor of target 3; deleting it would orphan the task
    const r = deleteNode(nodes, 2, [3]);
    expect(r.ok).toBe(false);
    expect(r.reason).toContain("cycling");
    expect(r.reason).toContain("target path");
    expect(findNode(r.nodes, 2)).not.toBeNull();
  });

  it("blocks deleting the target itself", () => {
    expect(deleteNode(fixture(), 3, [3]).ok).toBe(false);
  });

  it("reorders among siblings and stops at the edges", () => {
    const nodes = fixture();
    const up = reorderNode(nodes, 4, -1);
    expect(up.ok).toBe(true);
    expect(findParentContext(up.nodes, 4)?.index).toBe(0);
    expect(reorderNode(nodes, 3, -1).ok).toBe(false);
    expect(reorderNode(nodes, 4, 1).ok).toBe(false);
  });
});
