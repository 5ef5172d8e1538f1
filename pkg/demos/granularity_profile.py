"""Per-granularity bag and clone counts, with and without the keyword filter.

    python demos/granularity_profile.py [lines]
"""

import sys
import tempfile
from importlib.resources import files

from blockclone.evalkit.synth import generate_java_corpus
from blockclone.pipeline import PipelineConfig, granularity_table, run_pipeline

lines = int(sys.argv[1]) if len(sys.argv) > 1 else 30_000
corpus = generate_java_corpus(tempfile.mkdtemp(prefix="blockclone-"), lines, seed=5, clone_rate=0.2)
keywords = str(files("blockclone") / "grammars" / "java.keywords")

for label, kw in (("no filter", None), ("keyword filter", keywords)):
    summary, pairs = run_pipeline(PipelineConfig([corpus.root], language="java", keywords=kw))
    print(f"{label}: {summary.files} files, {summary.spt_nodes} blocks from "
          f"{summary.pt_internal_nodes} parse-tree nodes, {summary.bags} bags, {len(pairs)} pairs")
    print("   g      bags  in clones")
    for g, n, c in granularity_table(summary.bags_per_granularity, pairs):
        print(f"  {g:2d} {n:9d} {c:10d}")
