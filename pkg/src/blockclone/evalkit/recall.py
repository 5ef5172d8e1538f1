"""Recall against injected ground truth, and precision sampling.

A reported pair matches a ground-truth pair when, in either orientation, both
reported segments lie in the same files as the ground-truth segments and
overlap them with a line Jaccard ratio (shared lines over the union of
lines) of at least ``ratio``.
"""

from __future__ import annotations

import os
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..detect import ClonePair
from ..pipeline import read_report
from .mutate import GroundTruthEntry, SegmentRef, read_ground_truth


def line_overlap(a_start: int, a_end: int, b_start: int, b_end: int) -> float:
    inter = min(a_end, b_end) - max(a_start, b_start) + 1
    if inter <= 0:
        return 0.0
    return inter / (max(a_end, b_end) - min(a_start, b_start) + 1)


def _norm(path: str) -> str:
    return os.path.normpath(path)


def _seg_match(file: str, start: int, end: int, ref: SegmentRef, ratio: float) -> bool:
    return _norm(file) == _norm(ref.file) and line_overlap(start, end, ref.start, ref.end) >= ratio


def matches(pair: ClonePair, entry: GroundTruthEntry, ratio: float = 0.7) -> bool:
    a, b = pair.a, pair.b
    o, m = entry.original, entry.mutant
    return ((_seg_match(a.file, a.start, a.end, o, ratio) and _seg_match(b.file, b.start, b.end, m, ratio))
            or (_seg_match(a.file, a.start, a.end, m, ratio) and _seg_match(b.file, b.start, b.end, o, ratio)))


@dataclass
class RecallResult:
    matched: dict[str, int] = field(default_factory=dict)
    total: dict[str, int] = field(default_factory=dict)
    skipped: int = 0
    missed: list[GroundTruthEntry] = field(default_factory=list)

    @property
    def recall(self) -> dict[str, float]:
        return {t: self.matched.get(t, 0) / n for t, n in sorted(self.total.items()) if n}

    def overall(self) -> float:
        n = sum(self.total.values())
        return sum(self.matched.values()) / n if n else 0.0


def _eligible(e: GroundTruthEntry, min_lines: int, min_tokens: int) -> bool:
    if e.original.lines < min_lines or e.mutant.lines < min_lines:
        return False
    for t in (e.tokens_a, e.tokens_b):
        if t is not None and t < min_tokens:
            return False
    return True


def compute_recall(report: str | os.PathLike | Sequence[ClonePair],
                   ground_truth: str | os.PathLike | Sequence[GroundTruthEntry], *,
                   min_lines: int = 6, min_tokens: int = 50, ratio: float = 0.7) -> RecallResult:
    """Per-type recall of ``report`` over ``ground_truth``.

    Ground-truth pairs with a side shorter than ``min_lines`` lines or, when
    token counts are recorded, ``min_tokens`` bag tokens are not counted.
    Either argument may be a path or already-loaded records.
    """
    pairs = read_report(report) if isinstance(report, (str, os.PathLike)) else list(report)
    entries = (read_ground_truth(ground_truth) if isinstance(ground_truth, (str, os.PathLike))
               else list(ground_truth))
    by_files: dict[tuple[str, str], list[ClonePair]] = defaultdict(list)
    for p in pairs:
        fa, fb = _norm(p.a.file), _norm(p.b.file)
        by_files[(fa, fb) if fa <= fb else (fb, fa)].append(p)
    res = RecallResult()
    for e in entries:
        if not _eligible(e, min_lines, min_tokens):
            res.skipped += 1
            continue
        res.total[e.type] = res.total.get(e.type, 0) + 1
        fo, fm = _norm(e.original.file), _norm(e.mutant.file)
        key = (fo, fm) if fo <= fm else (fm, fo)
        if any(matches(p, e, ratio) for p in by_files.get(key, ())):
            res.matched[e.type] = res.matched.get(e.type, 0) + 1
        else:
            res.missed.append(e)
    return res


def _excerpt(path: str, start: int, end: int, root: str | None) -> list[str]:
    full = path if root is None or os.path.isabs(path) else os.path.join(root, path)
    try:
        with open(full, encoding="utf-8", errors="replace") as fh:
            lines = fh.read().splitlines()
    except OSError:
        return ["    (source unavailable)"]
    width = len(str(end))
    return [f"{i:>{width}} | {lines[i - 1]}" for i in range(start, min(end, len(lines)) + 1)]


def sample_for_precision(report: str | os.PathLike | Sequence[ClonePair], n: int, seed: int,
                         out_path, *, root: str | None = None) -> list[ClonePair]:
    """Uniform sample of ``n`` reported pairs, written with source excerpts.

    The sample is drawn without replacement and depends only on ``seed`` and
    the report contents.  Each pair is written as a heading followed by the
    two excerpts and a ``verdict:`` line left blank for the judge.
    """
    pairs = read_report(report) if isinstance(report, (str, os.PathLike)) else list(report)
    if n < 0:
        raise ValueError("sample size must be non-negative")
    if n > len(pairs):
        raise ValueError(f"sample size {n} exceeds the {len(pairs)} reported pairs")
    picked = sorted(random.Random(seed).sample(range(len(pairs)), n))
    chosen = [pairs[i] for i in picked]
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# precision sample: {n} of {len(pairs)} pairs, seed {seed}\n")
        for k, (i, p) in enumerate(zip(picked, chosen), 1):
            fh.write(f"\n## {k} (report line {i + 1}) granularity={p.granularity} "
                     f"similarity={p.similarity:.4f}\n")
            for tag, seg in (("A", p.a), ("B", p.b)):
                fh.write(f"--- {tag} {seg.file}:{seg.start}-{seg.end}\n")
                fh.write("\n".join(_excerpt(seg.file, seg.start, seg.end, root)) + "\n")
            fh.write("verdict:\n")
    return chosen


def recall_table(result: RecallResult) -> Iterable[str]:
    for t, r in result.recall.items():
        yield f"{t}: {result.matched.get(t, 0)}/{result.total[t]} = {r:.3f}"
