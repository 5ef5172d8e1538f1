"""Clone injection: mutate function-level segments and record ground truth.

A mutant is written into a *host* file: a copy of the original file with the
other function definitions removed and the target function replaced by its
mutated text.  Removing the siblings keeps the enclosing blocks of the two
files dissimilar, so the function pair is not hidden behind a coarser pair,
while the mutant keeps the nesting depth, and hence the granularity value, of
its original.

Mutations work on the token stream and on statement boundaries taken from
the parse tree, so the kit only needs the rule names listed in the grammar
bundle:

* ``T1`` changes whitespace and adds comments; the token sequence is unchanged.
* ``T2`` renames a fraction of the distinct identifiers, consistently.
* ``T3`` deletes (or inserts copies of) whole statements covering a fraction
  of the bag tokens.

Each attempt is reparsed and its similarity recomputed from the real bags;
an attempt that breaks the parse, moves the granularity, or disagrees with
the token-count arithmetic is retried with a fresh seed.
"""

from __future__ import annotations

import csv
import logging
import os
import random
import string
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from ..bags import make_bag
from ..detect import as_fraction, overlap
from ..frontend import LanguageFrontend, ParseError
from ..simplify import SimplifiedTree, SptNode, simplify
from ..tree import IDENTIFIER, SourceFileTree

log = logging.getLogger(__name__)

KINDS = ("T1", "T2", "T3")
GT_FIELDS = ("file_a", "start_a", "end_a", "file_b", "start_b", "end_b", "type")
GT_EXTRA = ("similarity", "tokens_a", "tokens_b")


class MutationError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class SegmentRef:
    """A function-level segment: file and inclusive 1-based line range."""

    file: str
    start: int
    end: int

    @property
    def lines(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class MutantSpec:
    """One requested mutant.

    ``fraction`` is the rename fraction for T2 and the edit fraction for T3
    (ignored for T1).  ``mode`` selects T3 deletion or insertion.  When
    ``band`` is given the constructed similarity must fall inside it, and no
    finer segment pair the matcher would accept may exceed its upper end.
    """

    segment: SegmentRef
    kind: str
    fraction: float = 0.0
    seed: int = 0
    mode: str = "delete"
    band: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown mutation class {self.kind!r}")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError("fraction must be in [0, 1]")
        if self.mode not in ("delete", "insert"):
            raise ValueError("mode must be 'delete' or 'insert'")


@dataclass(frozen=True)
class GroundTruthEntry:
    original: SegmentRef
    mutant: SegmentRef
    type: str
    similarity: float | None = None
    tokens_a: int | None = None
    tokens_b: int | None = None


@dataclass
class MutationResult:
    entries: list[GroundTruthEntry] = field(default_factory=list)
    files: list[str] = field(default_factory=list)
    failures: list[tuple[MutantSpec, str]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# source geometry

class _Source:
    """Text of one file with token character offsets."""

    def __init__(self, text: str, tree: SourceFileTree):
        self.text = text
        self.tree = tree
        starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                starts.append(i + 1)
        self.line_starts = starts
        self.offsets = []
        for t in tree.tokens:
            off = starts[t.line - 1] + t.column - 1
            if text[off:off + len(t.text)] != t.text:
                raise MutationError(f"{tree.path}: token offsets do not match the source text")
            self.offsets.append(off)
        parent = [-1] * len(tree.nodes)
        for n in tree.nodes:
            for c in n.children:
                parent[c] = n.id
        self.parent = parent

    def line_start(self, line: int) -> int:
        return self.line_starts[line - 1]

    def line_end(self, line: int) -> int:
        """Offset just past the newline ending ``line`` (or end of text)."""
        return self.line_starts[line] if line < len(self.line_starts) else len(self.text)

    def tok_end(self, i: int) -> int:
        return self.offsets[i] + len(self.tree.tokens[i].text)

    def span_lines(self, nid: int) -> tuple[int, int]:
        n = self.tree.nodes[nid]
        return self.tree.tokens[n.first].line, self.tree.tokens[n.last - 1].end_line

    def line_aligned(self, nid: int) -> bool:
        """Node starts its first line and nothing but trivia follows it on its last."""
        n = self.tree.nodes[nid]
        toks = self.tree.tokens
        if n.last <= n.first:
            return False
        first = toks[n.first]
        if self.text[self.line_start(first.line):self.offsets[n.first]].strip():
            return False
        end_line = toks[n.last - 1].end_line
        return n.last >= len(toks) or toks[n.last].line > end_line

    def region(self, nid: int) -> tuple[int, int]:
        a, b = self.span_lines(nid)
        return self.line_start(a), self.line_end(b)


def _read_source(frontend: LanguageFrontend, path: str, display: str | None = None) -> _Source:
    with open(path, "rb") as fh:
        raw = fh.read()
    tree = frontend.parse_source(raw, display or path)
    return _Source(raw.decode("utf-8"), tree)


def _spt_maps(spt: SimplifiedTree) -> tuple[dict[int, SptNode], dict[int, SptNode | None]]:
    by_origin: dict[int, SptNode] = {}
    parent: dict[int, SptNode | None] = {spt.root.origin: None}
    for node in spt:
        by_origin[node.origin] = node
        for c in node.children:
            parent[c.origin] = node
    return by_origin, parent


def _spt_ancestors(node: SptNode, parent) -> list[SptNode]:
    out = []
    p = parent[node.origin]
    while p is not None:
        out.append(p)
        p = parent[p.origin]
    return out


def _descendants(node: SptNode) -> Iterable[SptNode]:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.children)


def _jaccard(a: tuple[int, int], b: tuple[int, int]) -> float:
    inter = min(a[1], b[1]) - max(a[0], b[0]) + 1
    if inter <= 0:
        return 0.0
    return inter / (max(a[1], b[1]) - min(a[0], b[0]) + 1)


def _function_node(src: _Source, spt: SimplifiedTree, rules, start: int, end: int | None = None):
    """SPT block of a function-rule node on the given lines, or None."""
    for node in spt:
        n = src.tree.nodes[node.origin]
        if n.rule in rules:
            a, b = src.span_lines(node.origin)
            if a == start and (end is None or b == end):
                return node
    return None


# ---------------------------------------------------------------------------
# segment selection

def select_segments(paths: Sequence[str], frontend: LanguageFrontend, n: int, seed: int = 0, *,
                    min_lines: int = 6, min_tokens: int = 50, max_share: float = 0.5,
                    min_size: int = 2) -> list[SegmentRef]:
    """Up to ``n`` function segments suitable for injection, chosen by ``seed``.

    A candidate is a line-aligned function block with at least ``min_lines``
    lines and ``min_tokens`` bag tokens, holding at most ``max_share`` of the
    bag tokens of every enclosing block.
    """
    rules = set(frontend.bundle.function_rules)
    found: list[SegmentRef] = []
    for path in sorted(paths):
        try:
            src = _read_source(frontend, path)
        except (ParseError, MutationError, UnicodeDecodeError, OSError) as exc:
            log.info("skipping %s: %s", path, exc)
            continue
        spt = simplify(src.tree, min_size)
        _, parent = _spt_maps(spt)
        for node in spt:
            pn = src.tree.nodes[node.origin]
            if pn.rule not in rules or node.size < min_tokens or not src.line_aligned(node.origin):
                continue
            a, b = src.span_lines(node.origin)
            if b - a + 1 < min_lines:
                continue
            if any(node.size > max_share * anc.size for anc in _spt_ancestors(node, parent)):
                continue
            found.append(SegmentRef(path, a, b))
    rng = random.Random(seed)
    if len(found) <= n:
        return found
    return sorted(rng.sample(found, n))


# ---------------------------------------------------------------------------
# mutation operators; each returns (edits, expected similarity or None)

Edit = tuple[int, int, str]


def _fresh_name(rng: random.Random, taken: set[str]) -> str:
    while True:
        name = rng.choice(string.ascii_lowercase) + "".join(
            rng.choice(string.ascii_lowercase + string.digits) for _ in range(7))
        if name not in taken:
            taken.add(name)
            return name


def _mutate_t1(src: _Source, nid: int, rng: random.Random, comment: str | None) -> list[Edit]:
    n = src.tree.nodes[nid]
    edits: list[Edit] = []
    text = src.text
    for i in range(n.first + 1, n.last):
        lo, hi = src.tok_end(i - 1), src.offsets[i]
        gap = text[lo:hi]
        if "\\" in gap:
            continue
        if "\n" not in gap:
            if gap.strip() == "" and rng.random() < 0.3:
                edits.append((lo, hi, gap + " " * rng.randint(1, 2)))
            continue
        if rng.random() < 0.5:
            indent = gap[gap.rindex("\n") + 1:]
            if indent.strip():
                continue
            note = f"{comment} note {rng.randrange(10**6)}" if comment else ""
            cut = gap.index("\n") + 1
            edits.append((lo + cut, lo + cut, f"{indent}{note}\n"))
    if not edits:
        # always change something: one blank line inside the body
        for i in range(n.first + 1, n.last):
            lo, hi = src.tok_end(i - 1), src.offsets[i]
            gap = text[lo:hi]
            if "\n" in gap and "\\" not in gap:
                cut = lo + gap.index("\n") + 1
                edits.append((cut, cut, "\n"))
                break
    return edits


def _mutate_t2(src: _Source, nid: int, rng: random.Random, fraction: float,
               taken: set[str]) -> tuple[list[Edit], Fraction]:
    n = src.tree.nodes[nid]
    toks = src.tree.tokens
    idents = sorted({toks[i].text for i in range(n.first, n.last) if toks[i].category == IDENTIFIER})
    k = round(fraction * len(idents))
    if fraction > 0 and k == 0 and idents:
        k = 1
    chosen = set(rng.sample(idents, k))
    mapping = {old: _fresh_name(rng, taken) for old in sorted(chosen)}
    edits = []
    renamed = 0
    for i in range(n.first, n.last):
        t = toks[i]
        if t.category == IDENTIFIER and t.text in mapping:
            edits.append((src.offsets[i], src.tok_end(i), mapping[t.text]))
            renamed += 1
    total = n.size
    return edits, Fraction(total - renamed, total)


def _statements(src: _Source, nid: int, bundle) -> list[int]:
    """Line-aligned statements directly inside a statement container of ``nid``."""
    n = src.tree.nodes[nid]
    stmt_rules = set(bundle.statement_rules)
    block_rules = set(bundle.block_rules)
    out = []
    for m in src.tree.walk(nid):
        if m.id == nid or m.rule not in stmt_rules:
            continue
        p = src.parent[m.id]
        if p < 0 or src.tree.nodes[p].rule not in block_rules:
            continue
        if m.first < n.first or m.last > n.last or not src.line_aligned(m.id):
            continue
        out.append(m.id)
    return out


def _mutate_t3_delete(src: _Source, nid: int, rng: random.Random, fraction: float,
                      bundle) -> tuple[list[Edit], Fraction]:
    nodes = src.tree.nodes
    total = nodes[nid].size
    target = fraction * total
    stmts = _statements(src, nid, bundle)
    siblings = Counter(src.parent[s] for s in stmts)
    rng.shuffle(stmts)
    chosen: list[int] = []
    removed = 0
    for s in stmts:
        sn = nodes[s]
        if sn.size == 0 or removed + sn.size > target:
            continue
        if siblings[src.parent[s]] <= 1:
            continue  # keep every container non-empty
        if any(not (sn.last <= nodes[c].first or sn.first >= nodes[c].last) for c in chosen):
            continue
        a, b = src.span_lines(s)
        if any(not (b < src.span_lines(c)[0] or a > src.span_lines(c)[1]) for c in chosen):
            continue
        chosen.append(s)
        siblings[src.parent[s]] -= 1
        removed += sn.size
    if not chosen:
        raise MutationError("no statement fits the edit budget")
    edits = []
    for s in chosen:
        lo, hi = src.region(s)
        edits.append((lo, hi, ""))
    return edits, Fraction(total - removed, total)


def _reindent(block: str, old: str, new: str) -> str:
    out = []
    for line in block.splitlines(keepends=True):
        out.append(new + line[len(old):] if line.startswith(old) else line)
    return "".join(out)


def _mutate_t3_insert(src: _Source, nid: int, rng: random.Random, fraction: float,
                      bundle) -> tuple[list[Edit], Fraction]:
    nodes = src.tree.nodes
    toks = src.tree.tokens
    total = nodes[nid].size
    target = fraction * total
    stmts = _statements(src, nid, bundle)
    # copies must not carry multi-line tokens, whose text re-indenting would change
    sources = [s for s in stmts if nodes[s].size > 0
               and all(toks[i].end_line == toks[i].line for i in range(nodes[s].first, nodes[s].last))]
    if not sources or not stmts:
        raise MutationError("no statement to copy")
    inserted = 0
    edits = []
    used_points: set[int] = set()
    for _ in range(64):
        if inserted >= target:
            break
        s = rng.choice(sources)
        if inserted + nodes[s].size > target and inserted > 0:
            break
        point = rng.choice(stmts)
        if point in used_points:
            continue
        used_points.add(point)
        lo, hi = src.region(s)
        old = src.text[src.line_start(toks[nodes[s].first].line):src.offsets[nodes[s].first]]
        at = src.line_start(toks[nodes[point].first].line)
        new = src.text[at:src.offsets[nodes[point].first]]
        copy = _reindent(src.text[lo:hi], old, new)
        if not copy.endswith("\n"):
            copy += "\n"
        edits.append((at, at, copy))
        inserted += nodes[s].size
    if not edits:
        raise MutationError("no insertion made")
    return edits, Fraction(total, total + inserted)


def _apply(text: str, edits: Sequence[Edit]) -> str:
    # stable for edits sharing a position: later list entries end up later in the text
    for lo, hi, rep in sorted(edits, key=lambda e: (e[0], e[1]), reverse=True):
        text = text[:lo] + rep + text[hi:]
    return text


# ---------------------------------------------------------------------------
# host files

def _removable_functions(src: _Source, target: int, bundle) -> list[int]:
    """Outermost function definitions disjoint from the target, with wrappers."""
    nodes = src.tree.nodes
    rules = set(bundle.function_rules)
    wrappers = set(bundle.wrapper_rules)
    t = nodes[target]
    out = []
    stack = [src.tree.root]
    while stack:
        nid = stack.pop()
        n = nodes[nid]
        if n.last <= t.first or n.first >= t.last:
            if n.rule in rules:
                top = nid
                while src.parent[top] >= 0 and nodes[src.parent[top]].rule in wrappers:
                    top = src.parent[top]
                out.append(top)
                continue
        elif nid == target or (n.first >= t.first and n.last <= t.last):
            continue
        stack.extend(c for c in n.children if nodes[c].rule)
    return sorted(set(out))


def build_host(src: _Source, target: int, mutant_region: str, bundle) -> tuple[str, int]:
    """Host file text and the line at which the mutant starts in it."""
    lo, hi = src.region(target)
    edits: list[Edit] = [(lo, hi, mutant_region)]
    for f in _removable_functions(src, target, bundle):
        if not src.line_aligned(f):
            continue
        flo, fhi = src.region(f)
        edits.append((flo, fhi, ""))
    host = _apply(src.text, edits)
    removed_before = sum(fhi - flo for flo, fhi, rep in edits[1:] if fhi <= lo)
    start_line = host.count("\n", 0, lo - removed_before) + 1
    return host, start_line


# ---------------------------------------------------------------------------
# driver

@dataclass
class _Checked:
    entry: GroundTruthEntry
    host: str


def _bag_sim(x, y) -> float:
    return overlap(x.counts, y.counts) / max(x.total, y.total)


def _attempt(spec: MutantSpec, src: _Source, spt: SimplifiedTree, node: SptNode, frontend: LanguageFrontend,
             host_path: str, seed: int, *, theta, min_tokens: int, ratio: float, min_size: int) -> _Checked:
    bundle = frontend.bundle
    rng = random.Random(seed)
    nid = node.origin
    expected: Fraction | None = None
    if spec.kind == "T1":
        edits = _mutate_t1(src, nid, rng, bundle.line_comment)
        expected = Fraction(1)
    elif spec.kind == "T2":
        taken = {t.text for t in src.tree.tokens} | set(frontend.keywords)
        edits, expected = _mutate_t2(src, nid, rng, spec.fraction, taken)
    elif spec.mode == "delete":
        edits, expected = _mutate_t3_delete(src, nid, rng, spec.fraction, bundle)
    else:
        edits, expected = _mutate_t3_insert(src, nid, rng, spec.fraction, bundle)
    lo, hi = src.region(nid)
    local = [(a - lo, b - lo, r) for a, b, r in edits]
    region = _apply(src.text[lo:hi], local)
    host_text, start = build_host(src, nid, region, bundle)

    try:
        host_tree = frontend.parse_source(host_text.encode("utf-8"), host_path)
    except ParseError as exc:
        raise MutationError(f"mutant does not parse: {exc}") from None
    host = _Source(host_text, host_tree)
    host_spt = simplify(host_tree, min_size)
    mnode = _function_node(host, host_spt, set(bundle.function_rules), start)
    if mnode is None:
        raise MutationError("mutant function not found in host")
    if mnode.granularity != node.granularity:
        raise MutationError(f"granularity moved from {node.granularity} to {mnode.granularity}")

    orig_bag = make_bag(spt, node)
    mut_bag = make_bag(host_spt, mnode)
    if mut_bag is None:
        raise MutationError("mutant has no bag tokens")
    inter = overlap(orig_bag.counts, mut_bag.counts)
    actual = Fraction(inter, max(orig_bag.total, mut_bag.total))
    if actual != expected:
        raise MutationError(f"similarity {float(actual):.4f} differs from constructed {float(expected):.4f}")
    if spec.kind == "T1":
        a = [t.text for t in src.tree.span_tokens(nid)]
        b = [t.text for t in host_tree.span_tokens(mnode.origin)]
        if a != b:
            raise MutationError("T1 mutant changed the token sequence")
    if mut_bag.total < min_tokens:
        raise MutationError("mutant below the minimum token count")

    th = as_fraction(theta)
    # enclosing blocks must stay dissimilar or the function pair would be suppressed
    _, parent = _spt_maps(spt)
    _, host_parent = _spt_maps(host_spt)
    for anc_o, anc_m in zip(_spt_ancestors(node, parent), _spt_ancestors(mnode, host_parent)):
        if anc_o.size < min_tokens or anc_m.size < min_tokens:
            continue
        bo, bm = make_bag(spt, anc_o), make_bag(host_spt, anc_m)
        if Fraction(overlap(bo.counts, bm.counts), max(bo.total, bm.total)) >= th:
            raise MutationError(f"enclosing blocks at granularity {anc_o.granularity} are similar")

    orig_ref = SegmentRef(src.tree.path, orig_bag.segment.start, orig_bag.segment.end)
    mut_ref = SegmentRef(host_path, mut_bag.segment.start, mut_bag.segment.end)
    if spec.band is not None:
        lo_b, hi_b = spec.band
        if not lo_b <= float(actual) <= hi_b:
            raise MutationError(f"similarity {float(actual):.4f} outside band {spec.band}")
        worst = _cover_similarity(spt, node, host_spt, mnode, min_tokens, ratio,
                                  (orig_ref.start, orig_ref.end), (mut_ref.start, mut_ref.end))
        if worst > hi_b:
            raise MutationError(f"a finer matching pair reaches similarity {worst:.4f}")
    entry = GroundTruthEntry(orig_ref, mut_ref, spec.kind, float(actual), orig_bag.total, mut_bag.total)
    return _Checked(entry, host_text)


def _cover_similarity(spt, node, host_spt, mnode, min_tokens, ratio, orig_lines, mut_lines) -> float:
    """Highest similarity of any same-granularity block pair the matcher would accept."""
    best = 0.0
    ours = [n for n in _descendants(node) if n.size >= min_tokens]
    theirs = [n for n in _descendants(mnode) if n.size >= min_tokens]
    obags = [b for b in (make_bag(spt, n) for n in ours)
             if _jaccard((b.segment.start, b.segment.end), orig_lines) >= ratio]
    mbags = [b for b in (make_bag(host_spt, n) for n in theirs)
             if _jaccard((b.segment.start, b.segment.end), mut_lines) >= ratio]
    for x in obags:
        for y in mbags:
            if x.granularity == y.granularity:
                best = max(best, _bag_sim(x, y))
    return best


def mutate_corpus(specs: Sequence[MutantSpec], frontend: LanguageFrontend, out_dir, *,
                  theta=0.7, min_tokens: int = 50, ratio: float = 0.7, min_size: int = 2,
                  max_retries: int = 8, strict: bool = False) -> MutationResult:
    """Write one host file per spec under ``out_dir`` and collect ground truth.

    Failed attempts are retried up to ``max_retries`` times with derived
    seeds.  Specs that never succeed are listed in ``failures``, or raise
    :class:`MutationError` when ``strict`` is set.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = MutationResult()
    cache: dict[str, tuple[_Source, SimplifiedTree]] = {}
    rules = set(frontend.bundle.function_rules)
    for k, spec in enumerate(specs):
        seg = spec.segment
        if seg.file not in cache:
            src = _read_source(frontend, seg.file)
            cache[seg.file] = (src, simplify(src.tree, min_size))
        src, spt = cache[seg.file]
        node = _function_node(src, spt, rules, seg.start, seg.end)
        stem, ext = os.path.splitext(os.path.basename(seg.file))
        host_path = os.path.normpath(str(out_dir / f"m{k:05d}_{spec.kind}_{stem}{ext}"))
        if node is None:
            reason = f"no function block at {seg.file}:{seg.start}-{seg.end}"
            if strict:
                raise MutationError(reason)
            result.failures.append((spec, reason))
            continue
        reason = ""
        for attempt in range(max_retries + 1):
            seed = spec.seed + attempt * 7919
            try:
                checked = _attempt(spec, src, spt, node, frontend, host_path, seed, theta=theta,
                                   min_tokens=min_tokens, ratio=ratio, min_size=min_size)
            except MutationError as exc:
                reason = str(exc)
                log.debug("%s attempt %d: %s", host_path, attempt, reason)
                continue
            with open(host_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(checked.host)
            result.files.append(host_path)
            result.entries.append(checked.entry)
            break
        else:
            if strict:
                raise MutationError(f"{seg.file}:{seg.start}: {reason}")
            result.failures.append((spec, reason))
    return result


# ---------------------------------------------------------------------------
# ground-truth CSV

def write_ground_truth(entries: Iterable[GroundTruthEntry], path, *, extra: bool = True) -> int:
    """Ground truth as CSV with a header line.

    The first seven columns are fixed; ``extra`` appends the constructed
    similarity and both bag sizes, which the recall matcher uses for its
    minimum token filter.
    """
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(GT_FIELDS + (GT_EXTRA if extra else ()))
        for e in entries:
            row = [e.original.file, e.original.start, e.original.end,
                   e.mutant.file, e.mutant.start, e.mutant.end, e.type]
            if extra:
                row += ["" if e.similarity is None else f"{e.similarity:.6f}",
                        "" if e.tokens_a is None else e.tokens_a,
                        "" if e.tokens_b is None else e.tokens_b]
            w.writerow(row)
            rows += 1
    return rows


def read_ground_truth(path) -> list[GroundTruthEntry]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or (lineno == 1 and row[0] == GT_FIELDS[0]):
                continue
            if len(row) not in (len(GT_FIELDS), len(GT_FIELDS) + len(GT_EXTRA)):
                raise ValueError(f"{path}:{lineno}: expected 7 or 10 fields, got {len(row)}")
            try:
                a = SegmentRef(row[0], int(row[1]), int(row[2]))
                b = SegmentRef(row[3], int(row[4]), int(row[5]))
                sim = float(row[7]) if len(row) > 7 and row[7] else None
                ta = int(row[8]) if len(row) > 8 and row[8] else None
                tb = int(row[9]) if len(row) > 9 and row[9] else None
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed ground-truth line") from None
            out.append(GroundTruthEntry(a, b, row[6], sim, ta, tb))
    return out
