"""End-to-end orchestration: parse, simplify, bag, detect, report."""

from __future__ import annotations

import csv
import glob
import io
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bags import CodeSegment, TokenBag, bag_record, keyword_filter, load_keywords, make_bag
from .detect import ClonePair, DetectorConfig, detect_all
from .frontend import GrammarBundle, LanguageFrontend, ParseError, resolve_bundle
from .ptir import PtirError, read_ptir, write_ptir
from .simplify import simplify
from .tree import KEYWORD, TreeError

log = logging.getLogger(__name__)

REPORT_FIELDS = ("dir_a", "file_a", "start_a", "end_a", "dir_b", "file_b", "start_b", "end_b",
                 "granularity", "similarity")
STATS_FIELDS = ("granularity", "bags", "clone_bags")


class PipelineError(RuntimeError):
    """Fatal run failure; ``exit_code`` follows the command-line convention."""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass
class PipelineConfig:
    inputs: Sequence[str]
    grammar: str | None = None
    language: str | None = None
    ptir_in: bool = False
    keywords: str | None = None
    min_size: int = 2
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    report: str | None = None
    stats: str | None = None
    bag_dump: str | None = None
    ptir_out: str | None = None
    count_all_tokens: bool = False
    report_header: bool = False

    def __post_init__(self):
        if not 1 <= self.min_size <= self.detector.min_tokens:
            raise ValueError("configuration requires min_tokens >= min_size >= 1")


@dataclass
class RunSummary:
    files: int = 0
    parse_errors: int = 0
    tokens: int = 0
    bag_tokens: int = 0
    keyword_tokens: int = 0
    pt_internal_nodes: int = 0
    spt_nodes: int = 0
    bags_per_granularity: dict[int, int] = field(default_factory=dict)
    admitted_bags: int = 0
    pairs: int = 0
    seconds: dict[str, float] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def bags(self) -> int:
        return sum(self.bags_per_granularity.values())

    @property
    def keyword_ratio(self) -> float:
        return self.keyword_tokens / self.bag_tokens if self.bag_tokens else 0.0

    def lines(self) -> list[str]:
        """``key=value`` lines; timings last since they vary between runs."""
        per_g = ",".join(f"{g}:{n}" for g, n in sorted(self.bags_per_granularity.items()))
        out = [
            f"files={self.files}",
            f"parse_errors={self.parse_errors}",
            f"tokens={self.tokens}",
            f"bag_tokens={self.bag_tokens}",
            f"keyword_ratio={self.keyword_ratio:.4f}",
            f"pt_internal_nodes={self.pt_internal_nodes}",
            f"spt_nodes={self.spt_nodes}",
            f"bags={self.bags}",
            f"bags_per_granularity={per_g}",
            f"admitted_bags={self.admitted_bags}",
            f"pairs={self.pairs}",
        ]
        out.extend(f"time_{k}={v:.3f}" for k, v in self.seconds.items())
        return out


@dataclass
class FileResult:
    path: str
    error: str | None = None
    tokens: int = 0
    bag_tokens: int = 0
    keyword_tokens: int = 0
    pt_internal: int = 0
    spt_nodes: int = 0
    hist: dict[int, int] = field(default_factory=dict)
    bags: list[TokenBag] = field(default_factory=list)
    dump: str = ""


def collect_inputs(inputs: Iterable[str], extensions: Sequence[str]) -> list[tuple[str, str]]:
    """Expand files, directories and globs into ``(path, display path)`` pairs.

    Directories are searched recursively for ``extensions``.  The result is
    sorted by display path and free of duplicates.
    """
    found: dict[str, str] = {}
    exts = tuple(extensions)
    for item in inputs:
        if os.path.isdir(item):
            for dirpath, dirnames, filenames in os.walk(item):
                dirnames.sort()
                for name in filenames:
                    if not exts or name.endswith(exts):
                        p = os.path.join(dirpath, name)
                        found.setdefault(os.path.normpath(p), os.path.normpath(p))
        elif os.path.isfile(item):
            found.setdefault(os.path.normpath(item), os.path.normpath(item))
        else:
            for p in glob.glob(item, recursive=True):
                if os.path.isfile(p):
                    found.setdefault(os.path.normpath(p), os.path.normpath(p))
    return sorted(found.items(), key=lambda kv: kv[1])


class _Worker:
    """Per-process state; one frontend per worker since parsers are not re-entrant."""

    def __init__(self, cfg: PipelineConfig, bundle: GrammarBundle | None):
        self.cfg = cfg
        self.frontend = LanguageFrontend(bundle) if bundle is not None else None
        self.filter = load_keywords(cfg.keywords) if cfg.keywords else frozenset()

    def run(self, item: tuple[str, str]) -> FileResult:
        path, display = item
        cfg = self.cfg
        try:
            if self.frontend is None:
                tree = read_ptir(path)
            else:
                tree = self.frontend.parse_file(path, display)
        except (ParseError, PtirError, TreeError, OSError, UnicodeDecodeError) as exc:
            return FileResult(display, error=str(exc))
        if cfg.ptir_out and self.frontend is not None:
            out = os.path.join(cfg.ptir_out, display.lstrip(os.sep) + ".ptir")
            os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
            write_ptir(tree, out)
        spt = simplify(tree, cfg.min_size, count_all_tokens=cfg.count_all_tokens)
        det = cfg.detector
        lo_g, hi_g = det.granularity if det.granularity else (0, None)
        res = FileResult(tree.path, tokens=len(tree.tokens), pt_internal=tree.internal_count())
        res.bag_tokens = tree.span_size(0, len(tree.tokens))
        res.keyword_tokens = sum(1 for t in tree.tokens if t.category == KEYWORD)
        hist: Counter = Counter()
        dump = io.StringIO() if cfg.bag_dump else None
        nodes = tree.nodes
        for node in spt:
            res.spt_nodes += 1
            size = nodes[node.origin].size
            if size == 0:
                continue
            if self.filter and not keyword_filter(spt, node, self.filter):
                continue
            hist[node.granularity] += 1
            admitted = (size >= det.min_tokens and (det.max_tokens is None or size <= det.max_tokens)
                        and lo_g <= node.granularity and (hi_g is None or node.granularity <= hi_g))
            if admitted or dump is not None:
                bag = make_bag(spt, node)
                if dump is not None:
                    dump.write(bag_record(bag) + "\n")
                if admitted:
                    res.bags.append(bag)
        res.hist = dict(hist)
        res.dump = dump.getvalue() if dump is not None else ""
        return res


_STATE: _Worker | None = None


def _init_worker(cfg: PipelineConfig, bundle: GrammarBundle | None) -> None:
    global _STATE
    _STATE = _Worker(cfg, bundle)


def _run_item(item: tuple[str, str]) -> FileResult:
    return _STATE.run(item)


def process_files(cfg: PipelineConfig, items: Sequence[tuple[str, str]],
                  bundle: GrammarBundle | None) -> Iterable[FileResult]:
    """Per-file results in input order, parallel across ``detector.workers`` processes."""
    workers = cfg.detector.workers
    if workers <= 1 or len(items) < 2:
        w = _Worker(cfg, bundle)
        for item in items:
            yield w.run(item)
        return
    chunk = max(1, min(64, len(items) // (workers * 8) or 1))
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(cfg, bundle)) as pool:
        yield from pool.map(_run_item, items, chunksize=chunk)


def run_pipeline(cfg: PipelineConfig) -> tuple[RunSummary, list[ClonePair]]:
    summary = RunSummary()
    t0 = time.perf_counter()
    if cfg.ptir_in:
        bundle = None
        exts: Sequence[str] = (".ptir",)
    else:
        bundle = resolve_bundle(cfg.grammar, cfg.language)
        exts = bundle.extensions
        LanguageFrontend(bundle)  # surface grammar errors before any work is queued
    items = collect_inputs(cfg.inputs, exts)
    if not items:
        raise PipelineError("no input files found", 1)
    summary.files = len(items)

    dump_fh = open(cfg.bag_dump, "w", encoding="utf-8", newline="\n") if cfg.bag_dump else None
    bags: list[TokenBag] = []
    hist: Counter = Counter()
    try:
        for res in process_files(cfg, items, bundle):
            if res.error is not None:
                summary.parse_errors += 1
                summary.errors.append(res.error)
                log.warning("skipping %s", res.error)
                continue
            summary.tokens += res.tokens
            summary.bag_tokens += res.bag_tokens
            summary.keyword_tokens += res.keyword_tokens
            summary.pt_internal_nodes += res.pt_internal
            summary.spt_nodes += res.spt_nodes
            hist.update(res.hist)
            bags.extend(res.bags)
            if dump_fh is not None:
                dump_fh.write(res.dump)
    except OSError as exc:
        raise PipelineError(f"I/O failure: {exc}", 2) from None
    finally:
        if dump_fh is not None:
            dump_fh.close()
    summary.seconds["parse"] = time.perf_counter() - t0
    if summary.parse_errors == summary.files:
        raise PipelineError("all input files failed to parse", 3)
    summary.bags_per_granularity = dict(sorted(hist.items()))
    summary.admitted_bags = len(bags)

    t1 = time.perf_counter()
    pairs = detect_all(bags, cfg.detector)
    summary.pairs = len(pairs)
    summary.seconds["detect"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    try:
        if cfg.report:
            write_report(pairs, cfg.report, header=cfg.report_header)
        if cfg.stats:
            write_granularity_stats(summary.bags_per_granularity, pairs, cfg.stats)
    except OSError as exc:
        raise PipelineError(f"cannot write output: {exc}", 2) from None
    summary.seconds["report"] = time.perf_counter() - t2
    summary.seconds["total"] = time.perf_counter() - t0
    return summary, pairs


def report_rows(pairs: Iterable[ClonePair]) -> Iterable[list[str]]:
    for p in pairs:
        da, fa = os.path.split(p.a.file)
        db, fb = os.path.split(p.b.file)
        yield [da, fa, str(p.a.start), str(p.a.end), db, fb, str(p.b.start), str(p.b.end),
               str(p.granularity), f"{p.similarity:.4f}"]


def format_report(pairs: Iterable[ClonePair], header: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(REPORT_FIELDS)
    w.writerows(report_rows(pairs))
    return buf.getvalue()


def write_report(pairs: Iterable[ClonePair], path, header: bool = False) -> int:
    """Clone pairs as CSV, one per line; see ``REPORT_FIELDS``."""
    data = format_report(pairs, header).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def read_report(path) -> list[ClonePair]:
    """Parse a report written by :func:`write_report` (header optional)."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row:
                continue
            if lineno == 1 and tuple(row) == REPORT_FIELDS:
                continue
            if len(row) != len(REPORT_FIELDS):
                raise ValueError(f"{path}:{lineno}: expected {len(REPORT_FIELDS)} fields, got {len(row)}")
            try:
                g = int(row[8])
                a = CodeSegment(os.path.join(row[0], row[1]), int(row[2]), int(row[3]), g)
                b = CodeSegment(os.path.join(row[4], row[5]), int(row[6]), int(row[7]), g)
                out.append(ClonePair(a, b, float(row[9]), g))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed report line") from None
    return out


def granularity_table(bag_counts: dict[int, int] | Iterable[TokenBag],
                      pairs: Iterable[ClonePair]) -> list[tuple[int, int, int]]:
    """``(granularity, bags, clone-participating bags)`` rows, ascending."""
    if not isinstance(bag_counts, dict):
        bag_counts = Counter(b.granularity for b in bag_counts)
    members: dict[int, set] = {}
    for p in pairs:
        s = members.setdefault(p.granularity, set())
        s.add(p.a)
        s.add(p.b)
    gs = sorted(set(bag_counts) | set(members))
    return [(g, bag_counts.get(g, 0), len(members.get(g, ()))) for g in gs]


def write_granularity_stats(bag_counts, pairs, path) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_FIELDS)
    w.writerows(granularity_table(bag_counts, pairs))
    data = buf.getvalue().encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


granularity_stats = write_granularity_stats
