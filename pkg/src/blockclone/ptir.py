"""PT-IR: the line-oriented parse-tree interchange format.

Canonical form (UTF-8, ``\\n`` line ends, fields separated by a single tab)::

    ptir/1
    path	<path>
    tokens	<count>
    <index>	<line>	<column>	<category>	<text>
    ...
    nodes	<count>
    <id>	<rule>	<first>	<last>	<child,child,...>
    ...
    root	<id>

Token and node records appear in index/id order.  ``rule`` is empty for
terminal nodes and the child list is empty for leaves.  In ``path``, ``text``
and ``rule`` fields backslash, tab, newline and carriage return are written
as ``\\\\``, ``\\t``, ``\\n`` and ``\\r``; no other escapes exist.  The
document ends with a newline after the ``root`` record.
"""

from __future__ import annotations

from .tree import CATEGORIES, SourceFileTree, Token, TreeError, build_tree

MAGIC = "ptir/1"

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


class PtirError(ValueError):
    """Malformed PT-IR document or a tree that violates the tree invariants."""


def escape(text: str) -> str:
    if not any(c in text for c in _ESCAPES):
        return text
    return "".join(_ESCAPES.get(c, c) for c in text)


def unescape(text: str) -> str:
    if "\\" not in text:
        return text
    out = []
    it = iter(text)
    for c in it:
        if c != "\\":
            out.append(c)
            continue
        nxt = next(it, None)
        if nxt not in _UNESCAPES:
            raise PtirError(f"bad escape sequence \\{nxt or ''} in {text!r}")
        out.append(_UNESCAPES[nxt])
    return "".join(out)


def emit_ptir(tree: SourceFileTree) -> bytes:
    lines = [MAGIC, f"path\t{escape(tree.path)}", f"tokens\t{len(tree.tokens)}"]
    lines.extend(
        f"{t.index}\t{t.line}\t{t.column}\t{t.category}\t{escape(t.text)}" for t in tree.tokens
    )
    lines.append(f"nodes\t{len(tree.nodes)}")
    lines.extend(
        f"{n.id}\t{escape(n.rule)}\t{n.first}\t{n.last}\t{','.join(map(str, n.children))}"
        for n in tree.nodes
    )
    lines.append(f"root\t{tree.root}")
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def _int(field: str, lineno: int) -> int:
    if not field.isdigit():
        raise PtirError(f"line {lineno}: expected a non-negative integer, got {field!r}")
    return int(field)


def ingest_ptir(document: bytes | str) -> SourceFileTree:
    """Parse and validate one PT-IR document.

    Raises :class:`PtirError` naming the offending line, token or node.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PtirError(f"document is not UTF-8: {exc}") from None
    if not document.endswith("\n"):
        raise PtirError("document must end with a newline")
    lines = document[:-1].split("\n")
    pos = 0

    def take(lineno_hint: str) -> list[str]:
        nonlocal pos
        if pos >= len(lines):
            raise PtirError(f"unexpected end of document, expected {lineno_hint}")
        rec = lines[pos].split("\t")
        pos += 1
        return rec

    def header(name: str) -> str:
        rec = take(f"'{name}' record")
        if len(rec) != 2 or rec[0] != name:
            raise PtirError(f"line {pos}: expected '{name}<TAB>value', got {lines[pos - 1]!r}")
        return rec[1]

    if take("magic") != [MAGIC]:
        raise PtirError(f"line 1: expected format version {MAGIC!r}")
    path = unescape(header("path"))
    ntok = _int(header("tokens"), pos)
    tokens = []
    for i in range(ntok):
        rec = take(f"token record {i}")
        if len(rec) != 5:
            raise PtirError(f"line {pos}: token record needs 5 fields, got {len(rec)}")
        index, line, column = (_int(f, pos) for f in rec[:3])
        if index != i:
            raise PtirError(f"line {pos}: token {i}: non-contiguous index {index}")
        if rec[3] not in CATEGORIES:
            raise PtirError(f"line {pos}: token {i}: unknown category {rec[3]!r}")
        tokens.append(Token(index, line, column, unescape(rec[4]), rec[3]))
    nnodes = _int(header("nodes"), pos)
    nodes = []
    for i in range(nnodes):
        rec = take(f"node record {i}")
        if len(rec) != 5:
            raise PtirError(f"line {pos}: node record needs 5 fields, got {len(rec)}")
        nid, first, last = _int(rec[0], pos), _int(rec[2], pos), _int(rec[3], pos)
        children = [_int(c, pos) for c in rec[4].split(",")] if rec[4] else []
        nodes.append((nid, unescape(rec[1]), first, last, children))
    root = _int(header("root"), pos)
    if pos != len(lines):
        raise PtirError(f"line {pos + 1}: trailing content after root record")
    try:
        return build_tree(path, tokens, nodes, root)
    except TreeError as exc:
        raise PtirError(str(exc)) from None


def read_ptir(path) -> SourceFileTree:
    with open(path, "rb") as fh:
        return ingest_ptir(fh.read())


def write_ptir(tree: SourceFileTree, path) -> int:
    data = emit_ptir(tree)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)
