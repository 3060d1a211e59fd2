"""Lexical taxonomy parsing and randomized hierarchical menu task sampling.

Taxonomy file format: plain text, one label per line, children indented by
exactly two spaces relative to their parent. Blank lines and lines starting
with '#' are ignored. Multiple top-level labels are allowed and act as
sibling roots.

    sport
      cycling
        dune cycling
        road cycling
      swimming

A selection task drawn from the tree is a downward chain of 2 or 3 labels;
each displayed menu level contains the chain node plus up to ``max_items - 1``
of its siblings in random order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from importlib import resources

__all__ = [
    "TaxonomyError",
    "TaxonomyNode",
    "Taxonomy",
    "MenuLevel",
    "SelectionTask",
    "parse_taxonomy",
    "load_taxonomy",
    "serialize_taxonomy",
    "bundled_taxonomy",
    "sample_task",
    "generate_session_plan",
]

PROMPT_SEPARATOR = " → "  # arrow used when rendering "a -> b -> c" prompts

# characters reserved by the line-record file formats
_FORBIDDEN_IN_LABEL = ("|", "\t", "\n")


class TaxonomyError(ValueError):
    """Raised for malformed taxonomy files or invalid sampling requests."""


@dataclass
class TaxonomyNode:
    label: str
    children: list["TaxonomyNode"] = field(default_factory=list)

    def child(self, label: str) -> "TaxonomyNode | None":
        for c in self.children:
            if c.label == label:
                return c
        return None


@dataclass
class Taxonomy:
    """An immutable-after-load tree of labeled nodes with unique sibling labels."""

    roots: list[TaxonomyNode]

    def __len__(self) -> int:
        return sum(1 for _ in self.walk())

    def walk(self):
        """Yield every node in document order (depth-first)."""
        stack = list(reversed(self.roots))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def find(self, label: str) -> TaxonomyNode | None:
        """First node with the given label, in document order."""
        for node in self.walk():
            if node.label == label:
                return node
        return None

    def max_depth(self) -> int:
        def depth(node: TaxonomyNode) -> int:
            return 1 + max((depth(c) for c in node.children), default=0)

        return max((depth(r) for r in self.roots), default=0)


@dataclass
class MenuLevel:
    """One displayed menu level: the item labels and the target's 0-based index."""

    items: list[str]
    target_index: int

    def __post_init__(self):
        # eager: the rest of the pipeline indexes items[target_index] freely
        if not self.items:
            raise TaxonomyError("menu level has no items")
        if not 0 <= self.target_index < len(self.items):
            raise TaxonomyError(
                f"target_index {self.target_index} out of range for {len(self.items)} items"
            )

    @property
    def target(self) -> str:
        return self.items[self.target_index]

    def validate(self) -> None:
        for item in self.items:
            if not item or any(ch in item for ch in "|\t\n"):
                raise TaxonomyError(f"invalid item label {item!r}")


@dataclass
class SelectionTask:
    """A prompted selection path through 2 or 3 menu levels."""

    levels: list[MenuLevel]
    prompt: str = ""

    def __post_init__(self):
        if not self.prompt:
            self.prompt = PROMPT_SEPARATOR.join(self.targets())

    def targets(self) -> list[str]:
        return [lv.target for lv in self.levels]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def validate(self) -> None:
        if self.depth not in (2, 3):
            raise TaxonomyError(f"task depth must be 2 or 3, got {self.depth}")
        for lv in self.levels:
            lv.validate()
        if self.prompt != PROMPT_SEPARATOR.join(self.targets()):
            raise TaxonomyError("prompt does not list the per-level targets")


def _check_label(label: str, lineno: int) -> None:
    if not label:
        raise TaxonomyError(f"line {lineno}: empty label")
    for ch in _FORBIDDEN_IN_LABEL:
        if ch in label:
            raise TaxonomyError(f"line {lineno}: label contains forbidden character {ch!r}")


def parse_taxonomy(source_text: str) -> Taxonomy:
    """Parse the indentation-based taxonomy format into a validated tree.

    Raises TaxonomyError with the offending line number for empty labels,
    duplicate sibling labels, or indentation that skips a level (a child
    with no parent to attach to).
    """
    roots: list[TaxonomyNode] = []
    # stack[d] is the most recent node at depth d
    stack: list[TaxonomyNode] = []
    for lineno, raw in enumerate(source_text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        stripped = raw.lstrip(" ")
        indent = len(raw) - len(stripped)
        if stripped[0] == "\t" or "\t" in raw[:indent]:
            raise TaxonomyError(f"line {lineno}: tab characters are not allowed in indentation")
        if indent % 2 != 0:
            raise TaxonomyError(f"line {lineno}: indentation must be a multiple of two spaces")
        depth = indent // 2
        if depth > len(stack):
            raise TaxonomyError(
                f"line {lineno}: indented {depth} levels deep but parent is at level {len(stack) - 1}"
            )
        label = stripped.rstrip()
        _check_label(label, lineno)
        node = TaxonomyNode(label)
        siblings = roots if depth == 0 else stack[depth - 1].children
        if any(s.label == label for s in siblings):
            parent = "top level" if depth == 0 else f"{stack[depth - 1].label!r}"
            raise TaxonomyError(f"line {lineno}: duplicate sibling label {label!r} under {parent}")
        siblings.append(node)
        del stack[depth:]
        stack.append(node)
    if not roots:
        raise TaxonomyError("taxonomy file contains no nodes")
    return Taxonomy(roots)


def load_taxonomy(path) -> Taxonomy:
    """Read and parse a taxonomy file."""
    return parse_taxonomy(Path(path).read_text(encoding="utf-8"))


def serialize_taxonomy(taxonomy: Taxonomy) -> str:
    """Render a taxonomy back to the file format (parses to an isomorphic tree)."""
    lines: list[str] = []

    def emit(node: TaxonomyNode, depth: int) -> None:
        lines.append("  " * depth + node.label)
        for c in node.children:
            emit(c, depth + 1)

    for root in taxonomy.roots:
        emit(root, 0)
    return "\n".join(lines) + "\n"


def bundled_taxonomy() -> Taxonomy:
    """The noun taxonomy shipped with the package (WordNet-style extract)."""
    text = resources.files("menuperf").joinpath("data/taxonomy.txt").read_text("utf-8")
    return parse_taxonomy(text)


def _chains(taxonomy: Taxonomy, depth: int) -> list[tuple[TaxonomyNode, ...]]:
    """All downward chains of exactly `depth` nodes; a chain may start at any node."""
    found: list[tuple[TaxonomyNode, ...]] = []

    def walk(node: TaxonomyNode, chain: tuple[TaxonomyNode, ...]) -> None:
        chain = chain + (node,)
        if len(chain) == depth:
            found.append(chain)
            return
        for c in node.children:
            walk(c, chain)

    for start in taxonomy.walk():
        walk(start, ())
    return found


def _siblings(taxonomy: Taxonomy, chain: tuple[TaxonomyNode, ...], k: int) -> list[TaxonomyNode]:
    """Sibling candidates of chain[k]: co-children of its parent (or the roots)."""
    if k == 0:
        parent_children = _parent_children(taxonomy, chain[0])
    else:
        parent_children = chain[k - 1].children
    return [n for n in parent_children if n is not chain[k]]


def _parent_children(taxonomy: Taxonomy, node: TaxonomyNode) -> list[TaxonomyNode]:
    if node in taxonomy.roots:
        return taxonomy.roots
    for cand in taxonomy.walk():
        if node in cand.children:
            return cand.children
    return taxonomy.roots


def _sample_with_rng(
    taxonomy: Taxonomy, depth: int, rng: random.Random, max_items: int
) -> SelectionTask:
    if depth not in (2, 3):
        raise TaxonomyError(f"task depth must be 2 or 3, got {depth}")
    if max_items < 2:
        raise TaxonomyError(f"max_items must be >= 2, got {max_items}")
    chains = _chains(taxonomy, depth)
    if not chains:
        raise TaxonomyError(f"taxonomy has no downward path of depth {depth}")
    chain = chains[rng.randrange(len(chains))]
    levels: list[MenuLevel] = []
    for k, node in enumerate(chain):
        distractors = _siblings(taxonomy, chain, k)
        n_extra = min(max_items - 1, len(distractors))
        picked = rng.sample(distractors, n_extra)
        pos = rng.randrange(n_extra + 1)
        items = [d.label for d in picked]
        items.insert(pos, node.label)
        levels.append(MenuLevel(items=items, target_index=pos))
    return SelectionTask(levels=levels)


def sample_task(taxonomy: Taxonomy, depth: int, seed: int, max_items: int = 8) -> SelectionTask:
    """Sample one selection task; deterministic in (taxonomy, depth, seed, max_items)."""
    return _sample_with_rng(taxonomy, depth, random.Random(seed), max_items)


def generate_session_plan(
    taxonomy: Taxonomy,
    attempts: int = 5,
    tasks_per_attempt: int = 7,
    seed: int = 0,
    max_items: int = 8,
    depths: tuple[int, ...] = (2, 3),
) -> list[SelectionTask]:
    """Tasks for one session: `attempts` blocks of `tasks_per_attempt` tasks each.

    Task depth is drawn from `depths` per task. Defaults give the 5 x 7 = 35
    task session layout.
    """
    if attempts < 1 or tasks_per_attempt < 1:
        raise TaxonomyError("attempts and tasks_per_attempt must be >= 1")
    rng = random.Random(seed)
    plan = []
    for _ in range(attempts * tasks_per_attempt):
        depth = depths[rng.randrange(len(depths))]
        plan.append(_sample_with_rng(taxonomy, depth, rng, max_items))
    return plan
