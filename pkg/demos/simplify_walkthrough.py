"""Walk a six-token parse tree through simplification and bag generation.

    python demos/simplify_walkthrough.py
"""

from blockclone.bags import generate_bags
from blockclone.ptir import emit_ptir
from blockclone.simplify import simplify, spt_stats
from blockclone.tree import IDENTIFIER, KEYWORD, LITERAL, OTHER, Token, build_tree

# int x / y 1 ; / return, spread over three lines
tokens = [Token(i, line, col, text, cat) for i, (line, col, text, cat) in enumerate([
    (1, 1, "int", KEYWORD), (1, 5, "x", IDENTIFIER), (2, 1, "y", IDENTIFIER),
    (2, 3, "1", LITERAL), (2, 4, ";", OTHER), (3, 1, "return", KEYWORD)])]
nodes = [
    (0, "compilation_unit", 0, 6, (1,)),
    (1, "block_statements", 0, 6, (2, 3)),
    (2, "declaration", 0, 2, (4, 5)),
    (3, "statement", 2, 6, (6, 7, 8)),
    (4, "", 0, 1, ()), (5, "", 1, 2, ()), (6, "", 2, 3, ()),
    (7, "expression", 3, 5, (9, 10)),
    (8, "", 5, 6, ()), (9, "", 3, 4, ()), (10, "", 4, 5, ()),
]
tree = build_tree("walkthrough.src", tokens, nodes, 0)

print("parse tree as PT-IR:")
print(emit_ptir(tree).decode())

spt = simplify(tree, min_size=2)
print("simplified blocks (node 1 merged into the root, node 7 pruned to a leaf):")
for n in spt:
    rule = tree.nodes[n.origin].rule
    print(f"  {'  ' * n.granularity}node {n.origin} {rule} g={n.granularity} size={n.size}")
print("blocks per granularity:", spt_stats(spt))

print("token bags:")
for bag in generate_bags(spt):
    s = bag.segment
    print(f"  g={s.granularity} lines {s.start}-{s.end}: {dict(sorted(bag.counts.items()))}")
