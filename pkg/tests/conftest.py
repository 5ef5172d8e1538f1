import random

import pytest

from blockclone.tree import IDENTIFIER, KEYWORD, LITERAL, OTHER, Token, build_tree

# Worked simplification example: 0 -> 1 -> {2, 3}, 2 -> {4, 5},
# 3 -> {6, 7, 8}, 7 -> {9, 10}.  Nodes 4, 5, 6, 8, 9, 10 are terminals in
# source order 4, 5, 6, 9, 10, 8; token 10 is a ';' so node 7 holds a single
# bag token and falls below min_size=2.
EXAMPLE_TOKENS = [
    (1, 1, "int", KEYWORD),  # node 4
    (1, 5, "x", IDENTIFIER),  # node 5
    (2, 1, "y", IDENTIFIER),  # node 6
    (2, 3, "1", LITERAL),  # node 9
    (2, 4, ";", OTHER),  # node 10
    (3, 1, "return", KEYWORD),  # node 8
]
EXAMPLE_NODES = [
    (0, "compilation_unit", 0, 6, (1,)),
    (1, "block_statements", 0, 6, (2, 3)),
    (2, "declaration", 0, 2, (4, 5)),
    (3, "statement", 2, 6, (6, 7, 8)),
    (4, "", 0, 1, ()),
    (5, "", 1, 2, ()),
    (6, "", 2, 3, ()),
    (7, "expression", 3, 5, (9, 10)),
    (8, "", 5, 6, ()),
    (9, "", 3, 4, ()),
    (10, "", 4, 5, ()),
]


def example_tree(path="example.src"):
    tokens = [Token(i, line, col, text, cat) for i, (line, col, text, cat) in enumerate(EXAMPLE_TOKENS)]
    return build_tree(path, tokens, EXAMPLE_NODES, 0)


_TEXT = {
    KEYWORD: ("if", "for", "while", "return", "int"),
    IDENTIFIER: ("a", "b", "c", "d", "e"),
    LITERAL: ("0", "1", '"s"'),
    OTHER: (";", "(", ")", "{", "}", "="),
}


def random_tree(rng: random.Random, max_tokens: int = 40, path: str = "rand.src"):
    """Random valid parse tree with chains, mixed categories and nested spans."""
    n = rng.randint(0, max_tokens)
    tokens = []
    for i in range(n):
        cat = rng.choice((KEYWORD, IDENTIFIER, IDENTIFIER, LITERAL, OTHER, OTHER))
        tokens.append(Token(i, 1 + i // 4, 1 + (i % 4) * 4, rng.choice(_TEXT[cat]), cat))
    records = []

    def build(first, last, depth):
        rec = [len(records), f"r{rng.randint(0, 5)}", first, last, []]
        records.append(rec)
        if last - first == 0:
            return rec[0]
        k = 1 if rng.random() < 0.25 else rng.randint(1, min(4, last - first))
        cuts = sorted(rng.sample(range(first + 1, last), k - 1)) if k > 1 else []
        bounds = [first, *cuts, last]
        for a, b in zip(bounds, bounds[1:]):
            if (b - a == 1 and rng.random() < 0.7) or depth > 8:
                for t in range(a, b):
                    rec[4].append(len(records))
                    records.append([len(records), "", t, t + 1, []])
            else:
                rec[4].append(build(a, b, depth + 1))
        return rec[0]

    build(0, n, 0)
    return build_tree(path, tokens, [tuple(r) for r in records], 0)


JAVA_FIXTURE = """\
package demo;

// a comment that must not become a token
public class Shapes {
    private int count = 0;

    public Shapes(int start) {
        this.count = start;
    }

    /** Area of a rectangle. */
    public double area(double w, double h) {
        if (w < 0 || h < 0) {
            throw new IllegalArgumentException("negative");
        }
        return w * h;
    }

    public String label(int i) {
        String s = "shape" + i;
        while (i > 10) {
            i = i - 1;
        }
        return s;
    }
}
"""

JAVA_METHOD = """\
    public int total(int[] values, int limit) {
        int sum = 0;
        for (int i = 0; i < values.length; i++) {
            if (values[i] > limit) {
                sum = sum + values[i] * 2;
            } else {
                sum = sum - values[i];
            }
        }
        while (sum > limit) {
            sum = sum / 2;
        }
        return sum + limit;
    }
"""


def java_class(name, body, extra=""):
    return f"package demo;\n\npublic class {name} {{\n{extra}{body}}}\n"


@pytest.fixture(scope="session")
def java_frontend():
    from blockclone.frontend import LanguageFrontend, builtin_bundle

    return LanguageFrontend(builtin_bundle("java"))


# one PASS/FAIL line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
