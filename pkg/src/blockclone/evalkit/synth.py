"""Seeded generator of syntactically valid Java corpora for desk-scale runs."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

_SYLLABLES = ("ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi", "pe", "dra", "son", "bel", "cor",
              "fin", "gal", "hem", "jun", "lex", "mar", "nox", "ost", "pix", "qua", "ren")
_TYPES = ("int", "long", "double", "boolean", "String")
_CLASSES = ("List", "Map", "Set", "Optional", "Builder", "Buffer", "Node", "Record", "Entry")


@dataclass
class Corpus:
    root: str
    files: list[str] = field(default_factory=list)
    lines: int = 0


class JavaSynth:
    """Random Java source with classes, fields and methods of nested statements.

    ``clone_rate`` is the probability that a method is a lightly edited copy
    of an earlier one, so detection has something to find.
    """

    def __init__(self, seed: int = 0, vocabulary: int = 600, clone_rate: float = 0.1):
        self.rng = random.Random(seed)
        self.clone_rate = clone_rate
        words = set()
        while len(words) < vocabulary:
            n = self.rng.randint(2, 4)
            words.add("".join(self.rng.choice(_SYLLABLES) for _ in range(n)))
        self.words = sorted(words)
        self.pool: list[list[str]] = []

    def name(self) -> str:
        w = self.rng.choice(self.words)
        if self.rng.random() < 0.4:
            w += self.rng.choice(self.words).capitalize()
        return w

    def cls(self) -> str:
        return self.name().capitalize() + self.rng.choice(("Service", "Util", "Handler", "Model", ""))

    def literal(self) -> str:
        r = self.rng.random()
        if r < 0.5:
            return str(self.rng.randint(0, 100))
        if r < 0.8:
            return '"' + self.rng.choice(self.words) + '"'
        return self.rng.choice(("true", "false", "null", "0.5"))

    def expr(self, names: list[str], depth: int = 0) -> str:
        r = self.rng.random()
        if depth > 1 or r < 0.35:
            return self.rng.choice(names) if names and self.rng.random() < 0.7 else self.literal()
        if r < 0.6:
            op = self.rng.choice(("+", "-", "*", "/", "%"))
            return f"{self.expr(names, depth + 1)} {op} {self.expr(names, depth + 1)}"
        if r < 0.8:
            args = ", ".join(self.expr(names, depth + 1) for _ in range(self.rng.randint(0, 3)))
            return f"{self.name()}({args})"
        target = self.rng.choice(names) if names else "this"
        args = ", ".join(self.expr(names, depth + 1) for _ in range(self.rng.randint(0, 2)))
        return f"{target}.{self.name()}({args})"

    def cond(self, names: list[str]) -> str:
        op = self.rng.choice(("<", ">", "==", "!=", "<=", ">="))
        c = f"{self.expr(names, 1)} {op} {self.expr(names, 1)}"
        if self.rng.random() < 0.2:
            c += f" && {self.rng.choice(names) if names else 'flag'} != null"
        return c

    def block(self, names: list[str], indent: int, depth: int, count: int) -> list[str]:
        out: list[str] = []
        for _ in range(count):
            out.extend(self.statement(names, indent, depth))
        return out

    def statement(self, names: list[str], indent: int, depth: int) -> list[str]:
        pad = "    " * indent
        r = self.rng.random()
        if depth < 2 and r < 0.12:
            lines = [f"{pad}if ({self.cond(names)}) {{"]
            lines += self.block(names, indent + 1, depth + 1, self.rng.randint(1, 3))
            if self.rng.random() < 0.5:
                lines.append(f"{pad}}} else {{")
                lines += self.block(names, indent + 1, depth + 1, self.rng.randint(1, 2))
            lines.append(f"{pad}}}")
            return lines
        if depth < 2 and r < 0.2:
            i = self.rng.choice(("i", "j", "k", "idx"))
            bound = self.rng.choice(names) if names else "10"
            lines = [f"{pad}for (int {i} = 0; {i} < {bound}; {i}++) {{"]
            lines += self.block(names + [i], indent + 1, depth + 1, self.rng.randint(1, 3))
            lines.append(f"{pad}}}")
            return lines
        if depth < 2 and r < 0.25:
            lines = [f"{pad}while ({self.cond(names)}) {{"]
            lines += self.block(names, indent + 1, depth + 1, self.rng.randint(1, 2))
            lines.append(f"{pad}}}")
            return lines
        if depth < 2 and r < 0.29:
            lines = [f"{pad}try {{"]
            lines += self.block(names, indent + 1, depth + 1, self.rng.randint(1, 3))
            lines.append(f"{pad}}} catch (Exception {self.name()}) {{")
            lines.append(f"{pad}    {self.name()}.{self.name()}({self.literal()});")
            lines.append(f"{pad}}}")
            return lines
        if r < 0.55:
            v = self.name()
            t = self.rng.choice(_TYPES)
            names.append(v)
            return [f"{pad}{t} {v} = {self.expr(names[:-1])};"]
        if r < 0.62:
            v = self.name()
            names.append(v)
            c = self.rng.choice(_CLASSES)
            return [f"{pad}{c}<{self.cls()}> {v} = new {c}<>();"]
        if r < 0.8 and names:
            return [f"{pad}{self.rng.choice(names)} = {self.expr(names)};"]
        return [f"{pad}{self.call(names)};"]

    def call(self, names: list[str]) -> str:
        args = ", ".join(self.expr(names, 1) for _ in range(self.rng.randint(0, 3)))
        if names and self.rng.random() < 0.5:
            return f"{self.rng.choice(names)}.{self.name()}({args})"
        return f"{self.name()}({args})"

    def fresh_method(self) -> list[str]:
        params = [self.name() for _ in range(self.rng.randint(0, 3))]
        ptxt = ", ".join(f"{self.rng.choice(_TYPES)} {p}" for p in params)
        ret = self.rng.choice(_TYPES + ("void",))
        mods = self.rng.choice(("public", "private", "protected", "public static", "private static"))
        names = list(params)
        body = self.block(names, 2, 0, self.rng.randint(3, 9))
        if ret != "void":
            body.append(f"        return {self.expr(names)};")
        return [f"    {mods} {ret} {self.name()}({ptxt}) {{", *body, "    }"]

    def edited_copy(self, method: list[str]) -> list[str]:
        lines = list(method)
        inner = list(range(1, len(lines) - 1))
        simple = [i for i in inner if lines[i].rstrip().endswith(";")]
        if simple and self.rng.random() < 0.5:
            del lines[self.rng.choice(simple)]
        if self.rng.random() < 0.5:
            pos = self.rng.randint(1, len(lines) - 1)
            lines.insert(pos, f"        {self.call([])};")
        return lines

    def method(self) -> list[str]:
        if self.pool and self.rng.random() < self.clone_rate:
            return self.edited_copy(self.rng.choice(self.pool))
        m = self.fresh_method()
        if len(self.pool) < 500:
            self.pool.append(m)
        elif self.rng.random() < 0.1:
            self.pool[self.rng.randrange(len(self.pool))] = m
        return m

    def file(self, package: str, methods: int | None = None) -> str:
        cname = self.cls()
        lines = [f"package {package};", "", "import java.util.List;", "import java.util.Map;", ""]
        lines.append(f"/** Generated {cname}. */")
        lines.append(f"public class {cname} {{")
        for _ in range(self.rng.randint(1, 4)):
            lines.append(f"    private {self.rng.choice(_TYPES)} {self.name()} = {self.literal()};")
        for _ in range(methods if methods is not None else self.rng.randint(4, 12)):
            lines.append("")
            lines.extend(self.method())
        lines.append("}")
        return "\n".join(lines) + "\n"


def generate_java_corpus(root, target_lines: int, seed: int = 0, clone_rate: float = 0.1,
                         files_per_dir: int = 200) -> Corpus:
    """Write files under ``root`` until at least ``target_lines`` lines exist."""
    synth = JavaSynth(seed, clone_rate=clone_rate)
    corpus = Corpus(str(root))
    i = 0
    while corpus.lines < target_lines:
        sub = f"pkg{i // files_per_dir:03d}"
        d = os.path.join(root, sub)
        os.makedirs(d, exist_ok=True)
        text = synth.file(f"gen.{sub}")
        path = os.path.join(d, f"F{i:05d}.java")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        corpus.files.append(path)
        corpus.lines += text.count("\n")
        i += 1
    return corpus
