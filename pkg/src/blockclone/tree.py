"""Tokens, parse trees and the per-file tree container.

Every parser backend reduces its output to a :class:`SourceFileTree`: a flat
token table plus a node table whose spans are half-open token index ranges.
Nothing downstream looks at backend objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterator, NamedTuple, Sequence

KEYWORD = "keyword"
IDENTIFIER = "identifier"
LITERAL = "literal"
OTHER = "other"

CATEGORIES = (KEYWORD, IDENTIFIER, LITERAL, OTHER)
BAG_CATEGORIES = frozenset((KEYWORD, IDENTIFIER, LITERAL))


class TreeError(ValueError):
    """A token or node table violates a structural invariant."""


class Token(NamedTuple):
    index: int
    line: int
    column: int
    text: str
    category: str

    @property
    def end_line(self) -> int:
        return self.line + self.text.count("\n")

    @property
    def in_bag(self) -> bool:
        return self.category in BAG_CATEGORIES


class ParseNode(NamedTuple):
    """One parse-tree node. ``first``/``last`` form a half-open token span.

    Terminal nodes have an empty ``rule`` and cover exactly one token.
    ``size`` counts the bag-eligible tokens in the span.
    """

    id: int
    rule: str
    first: int
    last: int
    children: tuple[int, ...]
    size: int

    @property
    def is_terminal(self) -> bool:
        return self.rule == ""

    @property
    def length(self) -> int:
        return self.last - self.first


@dataclass(eq=False)
class SourceFileTree:
    path: str
    tokens: tuple[Token, ...]
    nodes: tuple[ParseNode, ...]
    root: int
    _eligible: list[int] = field(repr=False, default_factory=list)
    _texts: list[str] | None = field(repr=False, default=None)

    def __post_init__(self):
        if not self._eligible:
            self._eligible = eligible_prefix(self.tokens)

    @property
    def root_node(self) -> ParseNode:
        return self.nodes[self.root]

    def node(self, node_id: int) -> ParseNode:
        if not 0 <= node_id < len(self.nodes):
            raise KeyError(f"unknown node id {node_id}")
        return self.nodes[node_id]

    def span_size(self, first: int, last: int) -> int:
        """Bag-eligible token count in ``[first, last)``."""
        return self._eligible[last] - self._eligible[first]

    def eligible_texts(self, first: int, last: int) -> list[str]:
        """Texts of the bag-eligible tokens in ``[first, last)``, in order."""
        if self._texts is None:
            self._texts = [t.text for t in self.tokens if t.category in BAG_CATEGORIES]
        e = self._eligible
        return self._texts[e[first]:e[last]]

    def span_tokens(self, node_id: int) -> Sequence[Token]:
        n = self.nodes[node_id]
        return self.tokens[n.first:n.last]

    def walk(self, node_id: int | None = None) -> Iterator[ParseNode]:
        """Pre-order traversal from ``node_id`` (default: root)."""
        stack = [self.root if node_id is None else node_id]
        nodes = self.nodes
        while stack:
            n = nodes[stack.pop()]
            yield n
            stack.extend(reversed(n.children))

    def internal_count(self) -> int:
        return sum(1 for n in self.nodes if n.rule)

    def equivalent(self, other: "SourceFileTree") -> bool:
        """Same path, token table and node table (rules, spans, children)."""
        return (
            self.path == other.path
            and self.root == other.root
            and self.tokens == other.tokens
            and self.nodes == other.nodes
        )


def eligible_prefix(tokens: Sequence[Token]) -> list[int]:
    return [0, *accumulate(1 if t.category in BAG_CATEGORIES else 0 for t in tokens)]


def node_size(tree: SourceFileTree, node_id: int) -> int:
    """Number of keyword, identifier and literal tokens under ``node_id``."""
    n = tree.node(node_id)
    return tree.span_size(n.first, n.last)


def build_tree(
    path: str,
    tokens: Sequence[Token],
    nodes: Sequence[tuple[int, str, int, int, Sequence[int]]],
    root: int,
) -> SourceFileTree:
    """Validate raw tables and return a tree with node sizes filled in.

    ``nodes`` holds ``(id, rule, first, last, children)`` records; ids must be
    ``0..len(nodes)-1`` in order.
    """
    tokens = tuple(tokens)
    check_tokens(tokens)
    prefix = eligible_prefix(tokens)
    built = []
    for pos, (nid, rule, first, last, children) in enumerate(nodes):
        if nid != pos:
            raise TreeError(f"node ids must be contiguous and ordered: expected {pos}, got {nid}")
        built.append(ParseNode(nid, rule, first, last, tuple(children), prefix[last] - prefix[first]
                               if 0 <= first <= last <= len(tokens) else 0))
    built = tuple(built)
    check_nodes(tokens, built, root)
    return SourceFileTree(path, tokens, built, root, prefix)


def check_tokens(tokens: Sequence[Token]) -> None:
    for pos, t in enumerate(tokens):
        if t.index != pos:
            raise TreeError(f"token {pos}: non-contiguous index {t.index}")
        if not t.text:
            raise TreeError(f"token {pos}: empty text")
        if t.category not in CATEGORIES:
            raise TreeError(f"token {pos}: unknown category {t.category!r}")
        if t.line < 1 or t.column < 1:
            raise TreeError(f"token {pos}: line/column must be 1-based")


def check_nodes(tokens: Sequence[Token], nodes: Sequence[ParseNode], root: int) -> None:
    ntok = len(tokens)
    count = len(nodes)
    if not 0 <= root < count:
        raise TreeError(f"root id {root} does not name a node")
    for n in nodes:
        if not 0 <= n.first <= n.last <= ntok:
            raise TreeError(f"node {n.id}: span [{n.first},{n.last}) out of token range [0,{ntok})")
        if n.is_terminal:
            if n.children:
                raise TreeError(f"node {n.id}: terminal node has children")
            if n.last - n.first != 1:
                raise TreeError(f"node {n.id}: terminal node must cover exactly one token")
    root_node = nodes[root]
    if root_node.first != 0 or root_node.last != ntok:
        raise TreeError(f"node {root}: root span [{root_node.first},{root_node.last}) "
                        f"does not cover [0,{ntok})")
    parent = [-1] * count
    for n in nodes:
        prev_end = n.first
        for c in n.children:
            if not 0 <= c < count:
                raise TreeError(f"node {n.id}: unknown child id {c}")
            if c == root:
                raise TreeError(f"node {n.id}: lists the root {root} as a child")
            if parent[c] != -1:
                raise TreeError(f"node {c}: has more than one parent")
            parent[c] = n.id
            child = nodes[c]
            if child.first < n.first or child.last > n.last:
                raise TreeError(f"node {c}: span [{child.first},{child.last}) escapes parent "
                                f"{n.id} span [{n.first},{n.last})")
            if child.first < prev_end:
                raise TreeError(f"node {c}: span overlaps or precedes its previous sibling")
            prev_end = child.last
    seen = 0
    stack = [root]
    while stack:
        seen += 1
        stack.extend(nodes[stack.pop()].children)
    if seen != count:
        raise TreeError(f"{count - seen} node(s) unreachable from root {root}")
