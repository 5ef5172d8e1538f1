"""Parse-tree simplification into multi-granularity code blocks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .tree import SourceFileTree


@dataclass(eq=False)
class SptNode:
    """A block of the simplified tree.

    ``origin`` is the parse-tree node the block stands for.  ``pt_children``
    is that node's child list after chain merging and pruning, terminals
    included; ``children`` holds only the block-level (non-terminal) ones.
    """

    origin: int
    granularity: int
    size: int
    pt_children: tuple[int, ...] = ()
    children: list["SptNode"] = field(default_factory=list)


@dataclass(eq=False)
class SimplifiedTree:
    tree: SourceFileTree
    root: SptNode
    min_size: int
    count_all_tokens: bool = False

    def __iter__(self) -> Iterator[SptNode]:
        """Blocks in pre-order."""
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def __len__(self) -> int:
        return sum(1 for _ in self)


def simplify(tree: SourceFileTree, min_size: int = 2, *, count_all_tokens: bool = False) -> SimplifiedTree:
    """Collapse redundant chains and prune small subtrees.

    Nodes are visited in pre-order.  While a node's length equals that of its
    first child, the first child is replaced by its own children; a node whose
    size is below ``min_size`` then loses all children.  Length and size both
    count bag-eligible tokens, or every token when ``count_all_tokens`` is set.
    A block's granularity is its depth in the simplified tree.
    """
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    nodes = tree.nodes
    if count_all_tokens:
        def length(nid: int) -> int:
            n = nodes[nid]
            return n.last - n.first
    else:
        def length(nid: int) -> int:
            return nodes[nid].size

    def make(nid: int, depth: int) -> SptNode:
        kids = list(nodes[nid].children)
        own = length(nid)
        while kids and length(kids[0]) == own:
            kids[0:1] = nodes[kids[0]].children
        if own < min_size:
            kids = []
        return SptNode(nid, depth, nodes[nid].size, tuple(kids))

    root = make(tree.root, 0)
    stack = [root]
    while stack:
        spt = stack.pop()
        spt.children = [make(c, spt.granularity + 1) for c in spt.pt_children if nodes[c].rule]
        stack.extend(spt.children)
    return SimplifiedTree(tree, root, min_size, count_all_tokens)


def spt_stats(spt: SimplifiedTree) -> dict[int, int]:
    """Block count per granularity value."""
    return dict(sorted(Counter(n.granularity for n in spt).items()))
