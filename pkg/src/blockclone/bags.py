"""Token bag generation from simplified trees."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence



class CodeSegment(NamedTuple):
    """``(file, start, end, granularity)`` plus the origin parse node id.

    Lines are 1-based and inclusive.  ``node`` makes segments of distinct
    blocks on the same lines distinguishable.
    """

    file: str
    start: int
    end: int
    granularity: int
    node: int = -1

    def contains(self, other: "CodeSegment") -> bool:
        return self.file == other.file and self.start <= other.start and other.end <= self.end


@dataclass(eq=False)
class TokenBag:
    segment: CodeSegment
    counts: dict[str, int]
    total: int

    @property
    def granularity(self) -> int:
        return self.segment.granularity

    @property
    def key(self) -> tuple[str, int]:
        """Stable identity: file path and origin node id."""
        return self.segment.file, self.segment.node

    def sort_key(self):
        s = self.segment
        return s.file, s.start, s.end, s.node


def load_keywords(path) -> frozenset[str]:
    """Read a keyword list: one entry per line, ``#`` lines and blanks ignored."""
    with open(path, encoding="utf-8") as fh:
        entries = (line.rstrip() for line in fh)
        return frozenset(e for e in entries if e and not e.startswith("#"))


def keyword_filter(spt, node, keywords) -> bool:
    """True if some child of ``node`` covers at least one token and only keywords.

    The child list is the merged parse-tree child list, so keyword terminals
    count even though they are never blocks themselves.
    """
    tree = spt.tree
    tokens = tree.tokens
    for cid in node.pt_children:
        child = tree.nodes[cid]
        flag = 0
        for t in tokens[child.first:child.last]:
            flag |= 1 if t.text in keywords else 3
            if flag == 3:
                break
        if flag == 1:
            return True
    return False


def make_bag(spt, node) -> TokenBag | None:
    """Bag of the origin subtree of ``node``; ``None`` if it holds no tokens."""
    tree = spt.tree
    origin = tree.nodes[node.origin]
    if origin.size == 0:
        return None
    texts = tree.eligible_texts(origin.first, origin.last)
    tokens = tree.tokens
    # tokens are ordered, so the last token ends on the segment's last line
    seg = CodeSegment(tree.path, tokens[origin.first].line, tokens[origin.last - 1].end_line,
                      node.granularity, node.origin)
    return TokenBag(seg, dict(Counter(texts)), len(texts))


def generate_bags(
    spt,
    keywords: Iterable[str] = frozenset(),
    *,
    min_granularity: int | None = None,
    max_granularity: int | None = None,
    min_tokens: int | None = None,
    max_tokens: int | None = None,
) -> list[TokenBag]:
    """One bag per target block, in pre-order.

    With an empty keyword list every block is a target; otherwise only blocks
    passing :func:`keyword_filter`.  The optional ranges restrict targets by
    granularity and bag size.  Blocks without bag-eligible tokens yield nothing.
    """
    keywords = frozenset(keywords)
    out = []
    for node in spt:
        g = node.granularity
        if min_granularity is not None and g < min_granularity:
            continue
        if max_granularity is not None and g > max_granularity:
            continue
        if keywords and not keyword_filter(spt, node, keywords):
            continue
        bag = make_bag(spt, node)
        if bag is None:
            continue
        if min_tokens is not None and bag.total < min_tokens:
            continue
        if max_tokens is not None and bag.total > max_tokens:
            continue
        out.append(bag)
    return out


def bag_record(bag: TokenBag) -> str:
    s = bag.segment
    return json.dumps(
        {
            "file": s.file,
            "start": s.start,
            "end": s.end,
            "granularity": s.granularity,
            "node": s.node,
            "total": bag.total,
            "tokens": sorted(bag.counts.items()),
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def write_bag_dump(bags: Sequence[TokenBag], path) -> int:
    """JSON-lines dump, one record per bag in the given order."""
    data = "".join(bag_record(b) + "\n" for b in bags).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)
