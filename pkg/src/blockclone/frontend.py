"""Grammar-pluggable parsing into :class:`~blockclone.tree.SourceFileTree`.

The shipped backend is tree-sitter.  A grammar artifact is either the name of
an importable module exposing ``language()`` (the layout of the
``tree-sitter-<lang>`` wheels) or a path to a compiled grammar shared library
exporting ``tree_sitter_<language>``.  Either is loaded at run time; adding a
language means writing a bundle manifest, not touching this code.
"""

from __future__ import annotations

import ctypes
import importlib
import json
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .bags import load_keywords
from .tree import IDENTIFIER, KEYWORD, LITERAL, OTHER, SourceFileTree, Token, build_tree

log = logging.getLogger(__name__)

BUILTIN_DIR = Path(__file__).with_name("grammars")

_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_DEFAULT_LITERAL_KINDS = frozenset(
    ("true", "false", "null", "none", "nil", "string", "integer", "float", "number",
     "char", "character", "boolean", "concatenated_string")
)


class GrammarError(RuntimeError):
    """The grammar artifact or bundle could not be loaded."""


class ParseError(Exception):
    def __init__(self, path: str, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path = path
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class GrammarBundle:
    """Everything needed to parse one language.

    ``function_rules``, ``statement_rules``, ``block_rules`` (statement
    containers), ``wrapper_rules`` (nodes wrapping a function, such as
    decorators) and ``line_comment`` are only consulted by the mutation kit.
    """

    language: str
    grammar: str
    keywords: str | None = None
    entry_rule: str | None = None
    literal_kinds: tuple[str, ...] = ()
    identifier_kinds: tuple[str, ...] = ()
    function_rules: tuple[str, ...] = ()
    statement_rules: tuple[str, ...] = ()
    block_rules: tuple[str, ...] = ()
    wrapper_rules: tuple[str, ...] = ()
    line_comment: str | None = None
    extensions: tuple[str, ...] = ()

    @classmethod
    def from_file(cls, path) -> "GrammarBundle":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise GrammarError(f"cannot read bundle {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise GrammarError(f"bundle {path} is not valid JSON: {exc}") from None
        base = path.parent
        kw = raw.get("keywords")
        if kw is not None and not os.path.isabs(kw):
            kw = str(base / kw)
        grammar = raw["grammar"]
        if ("/" in grammar or grammar.endswith((".so", ".dylib", ".dll"))) and not os.path.isabs(grammar):
            grammar = str(base / grammar)
        return cls(
            language=raw["language"],
            grammar=grammar,
            keywords=kw,
            entry_rule=raw.get("entry_rule"),
            literal_kinds=tuple(raw.get("literal_kinds", ())),
            identifier_kinds=tuple(raw.get("identifier_kinds", ())),
            function_rules=tuple(raw.get("function_rules", ())),
            statement_rules=tuple(raw.get("statement_rules", ())),
            block_rules=tuple(raw.get("block_rules", ())),
            wrapper_rules=tuple(raw.get("wrapper_rules", ())),
            line_comment=raw.get("line_comment"),
            extensions=tuple(raw.get("extensions", ())),
        )


def builtin_bundle(language: str) -> GrammarBundle:
    manifest = BUILTIN_DIR / f"{language}.json"
    if not manifest.exists():
        known = sorted(p.stem for p in BUILTIN_DIR.glob("*.json"))
        raise GrammarError(f"no built-in bundle for {language!r}; available: {', '.join(known)}")
    return GrammarBundle.from_file(manifest)


def resolve_bundle(grammar: str | None = None, language: str | None = None) -> GrammarBundle:
    """Bundle from a manifest path, a bare grammar artifact, or a built-in name."""
    if grammar and grammar.endswith(".json"):
        return GrammarBundle.from_file(grammar)
    if grammar:
        lang = language or Path(grammar).stem.removeprefix("tree_sitter_").removeprefix("lib")
        base = BUILTIN_DIR / f"{lang}.json"
        if base.exists():
            b = GrammarBundle.from_file(base)
            return GrammarBundle(**{**b.__dict__, "grammar": grammar})
        return GrammarBundle(language=lang, grammar=grammar)
    if language:
        return builtin_bundle(language)
    raise GrammarError("either a grammar artifact or a language id is required")


def _load_language(bundle: GrammarBundle):
    import tree_sitter

    artifact = bundle.grammar
    if os.path.sep in artifact or artifact.endswith((".so", ".dylib", ".dll")):
        if not os.path.exists(artifact):
            raise GrammarError(f"grammar artifact {artifact} does not exist")
        try:
            lib = ctypes.cdll.LoadLibrary(artifact)
            fn = getattr(lib, f"tree_sitter_{bundle.language}")
        except (OSError, AttributeError) as exc:
            raise GrammarError(f"cannot load grammar library {artifact}: {exc}") from None
        fn.restype = ctypes.c_void_p
        ptr = fn()
        if not ptr:
            raise GrammarError(f"grammar library {artifact} returned no language")
        make = ctypes.pythonapi.PyCapsule_New
        make.restype = ctypes.py_object
        make.argtypes = [ctypes.c_void_p, ctypes.c_char_p, ctypes.c_void_p]
        return tree_sitter.Language(make(ptr, b"tree_sitter.Language", None))
    try:
        module = importlib.import_module(artifact)
    except ImportError as exc:
        raise GrammarError(f"grammar module {artifact!r} is not importable: {exc}") from None
    if not hasattr(module, "language"):
        raise GrammarError(f"grammar module {artifact!r} has no language() entry point")
    try:
        return tree_sitter.Language(module.language())
    except Exception as exc:  # corrupt or ABI-incompatible grammar
        raise GrammarError(f"grammar module {artifact!r} failed to load: {exc}") from None


class LanguageFrontend:
    """A loaded grammar plus the token classification rules for it.

    Parser objects are not re-entrant; use one frontend per worker.
    """

    def __init__(self, bundle: GrammarBundle):
        import tree_sitter

        self.bundle = bundle
        self.language = _load_language(bundle)
        if bundle.entry_rule and self.language.id_for_node_kind(bundle.entry_rule, True) is None:
            raise GrammarError(f"unknown entry rule {bundle.entry_rule!r} for {bundle.language}")
        self.keywords = load_keywords(bundle.keywords) if bundle.keywords else frozenset()
        self.literal_kinds = frozenset(bundle.literal_kinds) | _DEFAULT_LITERAL_KINDS
        self.identifier_kinds = frozenset(bundle.identifier_kinds)
        self._parser = tree_sitter.Parser(self.language)

    def _is_literal_kind(self, kind: str) -> bool:
        return kind in self.literal_kinds or "literal" in kind

    def _category(self, kind: str, named: bool, text: str) -> str:
        if self.keywords:
            if text in self.keywords:
                return KEYWORD
        if self._is_literal_kind(kind):
            return LITERAL
        if named and (kind in self.identifier_kinds or kind.endswith("identifier")):
            return IDENTIFIER
        if not self.keywords and _WORD.match(text):
            # no keyword list: word-shaped grammar constants are the language's keywords
            return KEYWORD
        return OTHER

    def parse_source(self, source: bytes, path: str) -> SourceFileTree:
        ts_tree = self._parser.parse(source)
        root = ts_tree.root_node
        if root.has_error:
            line, col, what = _first_error(root)
            raise ParseError(path, line, col, what)
        if self.bundle.entry_rule and root.type != self.bundle.entry_rule:
            raise ParseError(path, 1, 1, f"root rule {root.type!r} is not the entry rule "
                                         f"{self.bundle.entry_rule!r}")
        return self._convert(root, source, path)

    def parse_file(self, path, display_path: str | None = None) -> SourceFileTree:
        with open(path, "rb") as fh:
            source = fh.read()
        return self.parse_source(source, str(path) if display_path is None else display_path)

    def _convert(self, root, source: bytes, path: str) -> SourceFileTree:
        ascii_only = source.isascii()
        tokens: list[Token] = []
        records: list[list] = []
        category = self._category
        is_literal = self._is_literal_kind

        def add_token(node) -> None:
            start = node.start_byte
            text = source[start:node.end_byte].decode("utf-8", errors="replace")
            row, bcol = node.start_point
            if ascii_only:
                col = bcol + 1
            else:
                col = len(source[start - bcol:start].decode("utf-8", errors="replace")) + 1
            idx = len(tokens)
            tokens.append(Token(idx, row + 1, col, text, category(node.type, node.is_named, text)))
            records.append([len(records), "", idx, idx + 1, ()])

        # iterative pre-order; each frame is (record, child list, next child position)
        records.append([0, root.type, 0, 0, []])
        stack = [(records[0], root.children, 0)]
        while stack:
            rec, kids, i = stack.pop()
            while i < len(kids):
                child = kids[i]
                i += 1
                if child.is_extra or child.start_byte == child.end_byte:
                    continue
                if child.child_count == 0 or is_literal(child.type):
                    rec[4].append(len(records))
                    add_token(child)
                    continue
                rec[4].append(len(records))
                sub = [len(records), child.type, len(tokens), 0, []]
                records.append(sub)
                stack.append((rec, kids, i))
                rec, kids, i = sub, child.children, 0
            rec[3] = len(tokens)
        return build_tree(path, tokens, records, 0)


def _first_error(root) -> tuple[int, int, str]:
    stack = [root]
    while stack:
        n = stack.pop()
        if n.is_missing:
            r, c = n.start_point
            return r + 1, c + 1, f"missing {n.type!r}"
        if n.type == "ERROR":
            r, c = n.start_point
            return r + 1, c + 1, "syntax error"
        if n.has_error:
            stack.extend(reversed(n.children))
    r, c = root.start_point
    return r + 1, c + 1, "syntax error"


def load_grammar(bundle: GrammarBundle) -> LanguageFrontend:
    return LanguageFrontend(bundle)


def parse_file(frontend: LanguageFrontend, path, display_path: str | None = None) -> SourceFileTree:
    return frontend.parse_file(path, display_path)
