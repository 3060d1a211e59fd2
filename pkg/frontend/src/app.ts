import type { MenuDraft, MenuNode } from "./types";
import { Workbench } from "./store";
import { renderApp } from "./render";

/** Starter menu so the page is interactive before any editing. */
export function defaultDraft(): MenuDraft {
  let id = 0;
  const leaf = (label: string): MenuNode => ({ id: ++id, label, children: [] });
  const node = (label: string, children: MenuNode[]): MenuNode => ({
    id: ++id,
    label,
    children,
  });
  const cycling = node("cycling", [leaf("dune cycling"), leaf("road cycling")]);
  const swimming = node("swimming", [leaf("backstroke"), leaf("freestyle")]);
  const sport = node("sport", [cycling, swimming]);
  const duneId = cycling.children[0].id;
  const backstrokeId = swimming.children[1].id;
  return {
    name: "draft",
    roots: [sport],
    targets: [cycling.id, duneId, backstrokeId],
  };
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const wb = new Workbench({
    model: params.get("model") ?? "demo.w",
    baseUrl: params.get("service") ?? "",
    initialDraft: defaultDraft(),
  });
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  renderApp(root, wb);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
