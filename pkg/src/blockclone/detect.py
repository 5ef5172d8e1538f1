"""Bag-overlap clone detection within granularity partitions."""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .bags import CodeSegment, TokenBag

log = logging.getLogger(__name__)


class ClonePair(NamedTuple):
    a: CodeSegment
    b: CodeSegment
    similarity: float
    granularity: int


@dataclass(frozen=True)
class DetectorConfig:
    theta: float = 0.7
    min_tokens: int = 50
    granularity: tuple[int, int] | None = None
    workers: int = 1
    max_tokens: int | None = None

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError(f"theta must be in (0, 1], got {self.theta}")
        if self.min_tokens < 1:
            raise ValueError("min_tokens must be >= 1")

    def admits(self, bag: TokenBag) -> bool:
        if bag.total < self.min_tokens:
            return False
        if self.max_tokens is not None and bag.total > self.max_tokens:
            return False
        if self.granularity is not None:
            lo, hi = self.granularity
            return lo <= bag.granularity <= hi
        return True


def as_fraction(theta) -> Fraction:
    """Exact rational value of a threshold.

    Floats go through their shortest repr, so ``0.7`` means exactly 7/10.
    """
    if isinstance(theta, Fraction):
        return theta
    if isinstance(theta, float):
        return Fraction(repr(theta))
    return Fraction(theta)


def overlap(x: dict[str, int], y: dict[str, int]) -> int:
    """Multiset intersection size: sum of per-token minimum counts."""
    if len(x) > len(y):
        x, y = y, x
    get = y.get
    total = 0
    for t, c in x.items():
        d = get(t)
        if d:
            total += c if c < d else d
    return total


def similarity(x: TokenBag, y: TokenBag) -> float:
    if x.total <= 0 or y.total <= 0:
        raise ValueError("similarity is undefined for empty bags")
    return overlap(x.counts, y.counts) / max(x.total, y.total)


def _pair(x: TokenBag, y: TokenBag, inter: int) -> ClonePair:
    a, b = x.segment, y.segment
    if b < a:
        a, b = b, a
    return ClonePair(a, b, inter / max(x.total, y.total), a.granularity)


def brute_force_partition(bags: Sequence[TokenBag], theta) -> list[ClonePair]:
    """All-pairs reference search; quadratic, used as the oracle."""
    th = as_fraction(theta)
    p, q = th.numerator, th.denominator
    out = []
    for x, y in combinations(bags, 2):
        inter = overlap(x.counts, y.counts)
        if inter * q >= p * max(x.total, y.total):
            out.append(_pair(x, y, inter))
    out.sort()
    return out


class CandidateIndex:
    """Inverted index from token text to the bags containing it."""

    def __init__(self, bags: Sequence[TokenBag]):
        self.bags = list(bags)
        postings: dict[str, list[int]] = defaultdict(list)
        for i, bag in enumerate(self.bags):
            for t in bag.counts:
                postings[t].append(i)
        self.postings = dict(postings)

    def __len__(self) -> int:
        return len(self.postings)

    def candidates(self) -> Iterator[tuple[int, int]]:
        """Every pair ``(i, j)``, ``i < j``, sharing at least one token, once."""
        for j, bag in enumerate(self.bags):
            seen: set[int] = set()
            for t in bag.counts:
                for i in self.postings[t]:
                    if i >= j:
                        break
                    seen.add(i)
            for i in sorted(seen):
                yield i, j


def build_index(bags: Sequence[TokenBag]) -> CandidateIndex:
    return CandidateIndex(bags)


def detect_partition(bags: Sequence[TokenBag], cfg: DetectorConfig | float = DetectorConfig(),
                     *, prefix_filter: bool = True) -> list[ClonePair]:
    """Pairs with similarity >= theta among bags of one granularity.

    Candidates come from the inverted index.  With ``prefix_filter`` each bag
    only indexes the rarest ``n - ceil(theta * n) + 1`` elements of its token
    multiset, which cannot miss a pair reaching the threshold; a size filter
    drops candidates too small to reach it.  Every candidate is verified
    exactly, so the result equals :func:`brute_force_partition`.
    """
    theta = cfg.theta if isinstance(cfg, DetectorConfig) else cfg
    th = as_fraction(theta)
    p, q = th.numerator, th.denominator
    if not prefix_filter:
        index = CandidateIndex(bags)
        out = []
        for i, j in index.candidates():
            x, y = bags[i], bags[j]
            inter = overlap(x.counts, y.counts)
            if inter * q >= p * max(x.total, y.total):
                out.append(_pair(x, y, inter))
        out.sort()
        return out

    def need(n: int) -> int:
        return -(-p * n // q)

    n_bags = len(bags)
    if n_bags < 2:
        return []
    freq: dict[str, int] = defaultdict(int)
    for bag in bags:
        for t in bag.counts:
            freq[t] += 1
    vocab = {t: i for i, t in enumerate(freq)}
    order = sorted(range(n_bags), key=lambda i: (bags[i].total, bags[i].sort_key()))
    # count vectors in CSR layout, rows in processing order
    indptr = np.zeros(n_bags + 1, dtype=np.int64)
    for r, i in enumerate(order):
        indptr[r + 1] = indptr[r] + len(bags[i].counts)
    indices = np.empty(indptr[-1], dtype=np.int64)
    data = np.empty(indptr[-1], dtype=np.int64)
    for r, i in enumerate(order):
        c = bags[i].counts
        indices[indptr[r]:indptr[r + 1]] = [vocab[t] for t in c]
        data[indptr[r]:indptr[r + 1]] = list(c.values())
    totals = np.array([bags[i].total for i in order], dtype=np.int64)
    dense = np.zeros(len(vocab), dtype=np.int64)

    index: dict[str, list[int]] = defaultdict(list)
    out = []
    for r, i in enumerate(order):
        x = bags[i]
        n = x.total
        lo = need(n)
        budget = n - lo + 1
        prefix = []
        for t in sorted(x.counts, key=lambda t: (freq[t], t)):
            prefix.append(t)
            budget -= x.counts[t]
            if budget <= 0:
                break
        seen: set[int] = set()
        for t in prefix:
            seen.update(index[t])
        if seen:
            cand = np.fromiter(seen, dtype=np.int64, count=len(seen))
            cand = cand[totals[cand] >= lo]
            if len(cand):
                cand.sort()
                lo_x, hi_x = indptr[r], indptr[r + 1]
                dense[indices[lo_x:hi_x]] = data[lo_x:hi_x]
                starts = indptr[cand]
                lens = indptr[cand + 1] - starts
                offsets = np.zeros(len(cand), dtype=np.int64)
                np.cumsum(lens[:-1], out=offsets[1:])
                pos = np.repeat(starts - offsets, lens) + np.arange(int(lens.sum()))
                inter = np.add.reduceat(np.minimum(data[pos], dense[indices[pos]]), offsets)
                dense[indices[lo_x:hi_x]] = 0
                # n >= every candidate total by processing order
                if q < 1 << 31:
                    hits = np.flatnonzero(inter * q >= p * n)
                else:  # keep the comparison exact beyond int64 range
                    hits = [k for k, v in enumerate(inter.tolist()) if v * q >= p * n]
                for k in hits:
                    out.append(_pair(x, bags[order[cand[k]]], int(inter[k])))
        for t in prefix:
            index[t].append(r)
    out.sort()
    return out


def _partition_worker(args) -> list[ClonePair]:
    bags, theta = args
    return detect_partition(bags, theta)


def partition(bags: Iterable[TokenBag], cfg: DetectorConfig) -> dict[int, list[TokenBag]]:
    """Admitted bags grouped by granularity, each group in canonical order."""
    groups: dict[int, list[TokenBag]] = defaultdict(list)
    for bag in bags:
        if cfg.admits(bag):
            groups[bag.granularity].append(bag)
    for g in groups.values():
        g.sort(key=TokenBag.sort_key)
    return dict(sorted(groups.items()))


def detect_all(bags: Iterable[TokenBag], cfg: DetectorConfig = DetectorConfig()) -> list[ClonePair]:
    """Detect within each granularity partition, then suppress nested pairs."""
    groups = partition(bags, cfg)
    jobs = [(g, cfg.theta) for g in groups.values()]
    if cfg.workers > 1 and len(jobs) > 1:
        # largest partitions first; output is re-sorted so scheduling cannot leak
        jobs.sort(key=lambda j: -len(j[0]))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_partition_worker, jobs))
    else:
        results = [_partition_worker(j) for j in jobs]
    pairs = sorted(p for r in results for p in r)
    return filter_overlaps(pairs)


def _covers(p: ClonePair, q: ClonePair) -> bool:
    return ((p.a.contains(q.a) and p.b.contains(q.b))
            or (p.a.contains(q.b) and p.b.contains(q.a)))


def filter_overlaps(pairs: Sequence[ClonePair]) -> list[ClonePair]:
    """Drop pairs line-contained in a pair of smaller granularity value.

    Only pairs over the same two files can contain each other.  Partial
    overlaps are kept.
    """
    by_files: dict[tuple[str, str], list[ClonePair]] = defaultdict(list)
    kept = []
    for q in sorted(pairs, key=lambda r: r.granularity):
        key = (q.a.file, q.b.file) if q.a.file <= q.b.file else (q.b.file, q.a.file)
        bucket = by_files[key]
        if any(p.granularity < q.granularity and _covers(p, q) for p in bucket):
            continue
        bucket.append(q)
        kept.append(q)
    kept.sort()
    return kept
