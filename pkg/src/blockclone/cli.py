"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 fatal I/O error, 3 no file parsed.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .detect import DetectorConfig
from .frontend import GrammarError
from .pipeline import PipelineConfig, PipelineError, run_pipeline


def _granularity(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        lo_i = int(lo) if lo else 0
        hi_i = int(hi) if hi else 10**9
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected g_lo:g_hi, got {text!r}") from None
    if not sep or lo_i > hi_i or lo_i < 0:
        raise argparse.ArgumentTypeError(f"expected g_lo:g_hi with 0 <= g_lo <= g_hi, got {text!r}")
    return lo_i, hi_i


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="blockclone",
        description="Detect Type-1..3 clones between multi-granularity code blocks.",
    )
    ap.add_argument("inputs", nargs="+", help="source files, directories or globs")
    src = ap.add_argument_group("input")
    src.add_argument("--grammar", help="grammar bundle (.json), grammar module or shared library")
    src.add_argument("--lang", help="language id; selects a built-in bundle when --grammar is absent")
    src.add_argument("--ptir-in", action="store_true", help="inputs are PT-IR documents; no parser needed")
    src.add_argument("--ptir-out", metavar="DIR", help="also write each parsed file as PT-IR under DIR")
    blocks = ap.add_argument_group("blocks")
    blocks.add_argument("--keywords", help="keyword list; activates the keyword filter")
    blocks.add_argument("--min-size", type=int, default=2, help="simplifier minimum block size (default 2)")
    blocks.add_argument("--count-all-tokens", action="store_true",
                        help="measure block size over all tokens, not only bag tokens")
    det = ap.add_argument_group("detection")
    det.add_argument("--min-tokens", type=int, default=50, help="minimum bag size detected (default 50)")
    det.add_argument("--max-tokens", type=int, default=None)
    det.add_argument("--threshold", type=float, default=0.7, help="similarity threshold (default 0.7)")
    det.add_argument("--granularity", type=_granularity, metavar="LO:HI",
                     help="restrict detection to granularity values LO..HI")
    det.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    out = ap.add_argument_group("output")
    out.add_argument("--report", help="clone pair CSV")
    out.add_argument("--report-header", action="store_true", help="write a header line in the report")
    out.add_argument("--stats", help="per-granularity bag/clone counts CSV")
    out.add_argument("--bag-dump", help="JSON-lines dump of every generated bag")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if not args.ptir_in and not (args.grammar or args.lang):
        ap.print_usage(sys.stderr)
        print("blockclone: error: one of --grammar, --lang or --ptir-in is required", file=sys.stderr)
        return 1
    try:
        det = DetectorConfig(theta=args.threshold, min_tokens=args.min_tokens,
                             granularity=args.granularity, workers=max(1, args.jobs),
                             max_tokens=args.max_tokens)
        cfg = PipelineConfig(
            inputs=args.inputs, grammar=args.grammar, language=args.lang, ptir_in=args.ptir_in,
            keywords=args.keywords, min_size=args.min_size, detector=det, report=args.report,
            stats=args.stats, bag_dump=args.bag_dump, ptir_out=args.ptir_out,
            count_all_tokens=args.count_all_tokens, report_header=args.report_header,
        )
    except ValueError as exc:
        print(f"blockclone: error: {exc}", file=sys.stderr)
        return 1
    try:
        summary, _ = run_pipeline(cfg)
    except GrammarError as exc:
        print(f"blockclone: error: {exc}", file=sys.stderr)
        return 1
    except PipelineError as exc:
        print(f"blockclone: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"blockclone: error: {exc}", file=sys.stderr)
        return 2
    for err in summary.errors:
        print(f"parse_error={err}", file=sys.stderr)
    print("\n".join(summary.lines()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
