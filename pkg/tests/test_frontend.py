from collections import Counter

import pytest

from blockclone.frontend import (GrammarBundle, GrammarError, LanguageFrontend, ParseError, builtin_bundle,
                                 load_grammar, parse_file, resolve_bundle)
from blockclone.ptir import emit_ptir, ingest_ptir
from blockclone.tree import IDENTIFIER, KEYWORD, LITERAL, OTHER

from conftest import JAVA_FIXTURE


@pytest.fixture
def java_file(tmp_path):
    p = tmp_path / "Shapes.java"
    p.write_text(JAVA_FIXTURE, encoding="utf-8")
    return p


def _ts_count(source: bytes, kinds):
    # independent oracle: walk the backend tree directly
    import tree_sitter
    import tree_sitter_java

    parser = tree_sitter.Parser(tree_sitter.Language(tree_sitter_java.language()))
    root = parser.parse(source).root_node
    stack, n = [root], 0
    while stack:
        x = stack.pop()
        n += x.type in kinds
        stack.extend(x.children)
    return n


def test_java_root_rule_and_function_count(java_frontend, java_file):
    tree = parse_file(java_frontend, java_file)
    assert tree.nodes[tree.root].rule == "program"
    rules = set(java_frontend.bundle.function_rules)
    ours = sum(1 for n in tree.nodes if n.rule in rules)
    assert ours == _ts_count(java_file.read_bytes(), rules) == 3


def test_comments_and_whitespace_are_not_tokens(java_frontend, java_file):
    tree = parse_file(java_frontend, java_file)
    texts = [t.text for t in tree.tokens]
    assert not any(t.startswith(("//", "/*")) for t in texts)
    assert not any(t.isspace() for t in texts)


def test_categories(java_frontend, java_file):
    tree = parse_file(java_frontend, java_file)
    cat = {}
    for t in tree.tokens:
        cat.setdefault(t.text, set()).add(t.category)
    assert cat["public"] == {KEYWORD} and cat["while"] == {KEYWORD} and cat["this"] == {KEYWORD}
    assert cat["count"] == {IDENTIFIER} and cat["Shapes"] == {IDENTIFIER}
    assert cat['"negative"'] == {LITERAL} and cat["10"] == {LITERAL}
    assert cat[";"] == {OTHER} and cat["{"] == {OTHER}
    # keyword iff the text is in the keyword list
    for t in tree.tokens:
        assert (t.category == KEYWORD) == (t.text in java_frontend.keywords)


def test_positions_are_one_based(java_frontend, java_file):
    tree = parse_file(java_frontend, java_file)
    lines = JAVA_FIXTURE.splitlines()
    for t in tree.tokens:
        assert lines[t.line - 1][t.column - 1:].startswith(t.text.split("\n")[0])
    assert tree.tokens[0].text == "package" and (tree.tokens[0].line, tree.tokens[0].column) == (1, 1)


def test_non_ascii_columns_are_characters(java_frontend):
    src = 'class A { String s = "héllo"; int x = 1; }\n'.encode("utf-8")
    tree = java_frontend.parse_source(src, "A.java")
    x = next(t for t in tree.tokens if t.text == "x")
    assert x.column == src.decode("utf-8").index(" x ") + 2


def test_string_literal_is_one_token(java_frontend):
    tree = java_frontend.parse_source(b'class A { String s = "a b c"; }', "A.java")
    assert '"a b c"' in [t.text for t in tree.tokens]


def test_empty_file(java_frontend):
    tree = java_frontend.parse_source(b"", "Empty.java")
    assert tree.tokens == () and tree.root_node.first == tree.root_node.last == 0


def test_syntax_error_location(java_frontend):
    with pytest.raises(ParseError) as exc:
        java_frontend.parse_source(b"class A {\n  void f( {\n}\n", "Bad.java")
    assert exc.value.path == "Bad.java" and exc.value.line >= 1 and exc.value.column >= 1
    assert "Bad.java:" in str(exc.value)


def test_reload_is_deterministic(java_file):
    a = load_grammar(builtin_bundle("java"))
    b = load_grammar(builtin_bundle("java"))
    assert emit_ptir(parse_file(a, java_file)) == emit_ptir(parse_file(b, java_file))


def test_ptir_round_trip_of_parsed_file(java_frontend, java_file):
    tree = parse_file(java_frontend, java_file)
    doc = emit_ptir(tree)
    assert emit_ptir(ingest_ptir(doc)) == doc


def test_missing_artifact(tmp_path):
    with pytest.raises(GrammarError, match="does not exist"):
        LanguageFrontend(GrammarBundle("java", str(tmp_path / "nope.so")))
    with pytest.raises(GrammarError, match="not importable"):
        LanguageFrontend(GrammarBundle("java", "no_such_grammar_module"))
    with pytest.raises(GrammarError):
        builtin_bundle("cobol")
    with pytest.raises(GrammarError):
        GrammarBundle.from_file(tmp_path / "missing.json")


def test_corrupt_artifact(tmp_path):
    bad = tmp_path / "libjava.so"
    bad.write_bytes(b"\x7fELF not really a library")
    with pytest.raises(GrammarError, match="cannot load"):
        LanguageFrontend(GrammarBundle("java", str(bad)))
    with pytest.raises(GrammarError, match="no language"):
        LanguageFrontend(GrammarBundle("java", "json"))
    manifest = tmp_path / "x.json"
    manifest.write_text("{not json")
    with pytest.raises(GrammarError, match="not valid JSON"):
        resolve_bundle(str(manifest))


def test_unknown_entry_rule():
    b = builtin_bundle("java")
    with pytest.raises(GrammarError, match="unknown entry rule"):
        LanguageFrontend(GrammarBundle(**{**b.__dict__, "entry_rule": "no_such_rule"}))


_SHIM = """
static const void *lang;
void shim_set(const void *p) { lang = p; }
const void *tree_sitter_java(void) { return lang; }
"""


def test_shared_library_artifact(tmp_path, java_file):
    # a compiled library exporting tree_sitter_java, fed the wheel's grammar pointer
    import ctypes
    import shutil
    import subprocess

    import tree_sitter_java

    cc = shutil.which("cc") or shutil.which("gcc")
    if cc is None:
        pytest.skip("no C compiler")
    (tmp_path / "shim.c").write_text(_SHIM)
    so = tmp_path / "libjava_shim.so"
    subprocess.run([cc, "-shared", "-fPIC", "-o", str(so), str(tmp_path / "shim.c")], check=True)
    get = ctypes.pythonapi.PyCapsule_GetPointer
    get.restype = ctypes.c_void_p
    get.argtypes = [ctypes.py_object, ctypes.c_char_p]
    ptr = get(tree_sitter_java.language(), b"tree_sitter.Language")
    lib = ctypes.cdll.LoadLibrary(str(so))
    lib.shim_set.argtypes = [ctypes.c_void_p]
    lib.shim_set(ptr)

    fe = LanguageFrontend(resolve_bundle(str(so), "java"))
    ref = LanguageFrontend(builtin_bundle("java"))
    assert fe.bundle.keywords == ref.bundle.keywords
    assert emit_ptir(fe.parse_file(java_file)) == emit_ptir(ref.parse_file(java_file))


def test_custom_manifest(tmp_path, java_file):
    (tmp_path / "kw.txt").write_text("# tiny list\nclass\nreturn\n")
    (tmp_path / "j.json").write_text(
        '{"language": "java", "grammar": "tree_sitter_java", "keywords": "kw.txt", "entry_rule": "program"}')
    fe = LanguageFrontend(resolve_bundle(str(tmp_path / "j.json")))
    tree = fe.parse_file(java_file)
    kws = Counter(t.text for t in tree.tokens if t.category == KEYWORD)
    assert set(kws) == {"class", "return"}


def test_python_bundle(tmp_path):
    pytest.importorskip("tree_sitter_python")
    p = tmp_path / "m.py"
    p.write_text("def f(x):\n    # note\n    if x > 1:\n        return 'big'\n    return None\n")
    fe = LanguageFrontend(builtin_bundle("python"))
    tree = fe.parse_file(p)
    assert tree.root_node.rule == "module"
    assert sum(1 for n in tree.nodes if n.rule == "function_definition") == 1
    cats = {t.text: t.category for t in tree.tokens}
    assert cats["def"] == KEYWORD and cats["x"] == IDENTIFIER and cats["'big'"] == LITERAL
    assert "None" in fe.keywords and cats["None"] == KEYWORD
