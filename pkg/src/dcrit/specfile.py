"""Problem files: a sectioned key-value format with infix polynomial literals.

See docs/spec_format.md for the grammar.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import Element, GradedAlgebra, Generator, polynomial_ring
from .hopf import (
    AdditiveHopf,
    Coaction,
    FiniteGroupHopf,
    HopfError,
    HTensor,
    TorusHopf,
    build_hopf,
)
from .model import Problem

SECTIONS = ("ring", "group", "coaction", "function", "weights", "tasks")
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class SpecError(ValueError):
    """Parse or validation error with a location."""

    def __init__(self, message: str, line: int = 0, column: int = 0, kind: str = "parse"):
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(loc + message)
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": self.message, "line": self.line, "column": self.column}


@dataclass
class Entry:
    key: str
    value: str
    line: int
    column: int  # column where the value starts (1-based)


@dataclass
class Task:
    name: str
    options: dict
    line: int


@dataclass
class ProblemSpec:
    text: str
    sections: dict
    problem: Problem
    tasks: list = field(default_factory=list)
    source: str = ""

    @property
    def sha256(self) -> str:
        return spec_hash(self.text)


def normalize_text(text: str) -> str:
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    return "\n".join(l.rstrip() for l in lines).strip("\n") + "\n"


def spec_hash(text: str) -> str:
    return hashlib.sha256(normalize_text(text).encode("utf-8")).hexdigest()


# -- polynomial literals -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Parser:
    def __init__(self, text: str, algebra: GradedAlgebra, line: int, col: int):
        self.text = text
        self.alg = algebra
        self.line = line
        self.col0 = col
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            if m.group(1):
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            else:
                self.toks.append(("op", m.group(3), m.start(3)))
        self.i = 0

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise SpecError(msg, self.line, self.col0 + pos)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.i -= 1
            self.error(f"expected {op!r}")

    def parse(self) -> Element:
        if not self.toks:
            self.error("empty polynomial")
        e = self.expr()
        if self.i != len(self.toks):
            self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                out = out + t if val == "+" else out - t
            else:
                return out

    def term(self):
        out = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.power()
            else:
                return out

    def exponent(self) -> int:
        kind, val, pos = self.peek()
        neg = False
        paren = False
        if kind == "op" and val == "(":
            self.take()
            paren = True
            kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            neg = True
            kind, val, pos = self.peek()
        if kind != "int":
            self.error("expected an integer exponent")
        self.take()
        if paren:
            self.expect_op(")")
        return -int(val) if neg else int(val)

    def power(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.power()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            e = self.exponent()
            try:
                return base ** e
            except ValueError as exc:
                self.error(str(exc), pos)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, p3 = self.take()
                if k3 != "int":
                    self.i -= 1
                    self.error("expected an integer denominator")
                if int(v3) == 0:
                    self.error("zero denominator", p3)
                return self.alg.scalar(Fraction(int(val), int(v3)))
            return self.alg.scalar(int(val))
        if kind == "name":
            if val not in self.alg.index:
                self.error(f"unknown variable {val!r}", pos)
            return self.alg.gen(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        self.i -= 1
        if kind is None:
            self.error("unexpected end of polynomial")
        self.error(f"unexpected {val!r}", pos)


def parse_polynomial(text: str, algebra: GradedAlgebra, line: int = 1, column: int = 1) -> Element:
    return _Parser(text, algebra, line, column).parse()


# -- sections --------------------------------------------------------------------

def parse_sections(text: str) -> dict:
    sections: dict = {}
    current = None
    for ln, raw in enumerate(normalize_text(text).split("\n"), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        lead = len(stripped) - len(stripped.lstrip())
        s = stripped.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise SpecError("unterminated section header", ln, lead + 1)
            name = s[1:-1].strip()
            if name not in SECTIONS:
                raise SpecError(f"unknown section [{name}]", ln, lead + 2)
            if name in sections:
                raise SpecError(f"duplicate section [{name}]", ln, lead + 1)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise SpecError("entry outside of any section", ln, lead + 1)
        if "=" in s:
            key, _, value = s.partition("=")
            vcol = stripped.index("=") + 2 + (len(value) - len(value.lstrip()))
            sections[current].append(Entry(key.strip(), value.strip(), ln, vcol))
        else:
            sections[current].append(Entry(s, "", ln, lead + 1))
    return sections


def _single(entries: list, section: str, required: set, optional: set) -> dict:
    out = {}
    for e in entries:
        if e.key not in required | optional:
            raise SpecError(f"unknown key {e.key!r} in [{section}]", e.line, 1)
        if e.key in out:
            raise SpecError(f"duplicate key {e.key!r} in [{section}]", e.line, 1)
        out[e.key] = e
    for k in sorted(required - set(out)):
        raise SpecError(f"missing key {k!r} in [{section}]")
    return out


def _names(e: Entry) -> list[str]:
    if not e.value:
        return []
    out = []
    for part in e.value.split(","):
        p = part.strip()
        if not NAME_RE.fullmatch(p):
            raise SpecError(f"bad name {p!r}", e.line, e.column)
        out.append(p)
    return out


def _int(e: Entry) -> int:
    try:
        return int(e.value)
    except ValueError:
        raise SpecError(f"expected an integer, got {e.value!r}", e.line, e.column) from None


def _parse_ring(entries) -> GradedAlgebra:
    d = _single(entries, "ring", {"variables"}, {"laurent"})
    ev = d["variables"]
    variables = []
    if ev.value:
        for part in ev.value.split(","):
            p = part.strip()
            name, _, w = p.partition(":")
            name = name.strip()
            if not NAME_RE.fullmatch(name):
                raise SpecError(f"bad variable name {name!r}", ev.line, ev.column)
            try:
                weight = int(w) if w.strip() else 1
            except ValueError:
                raise SpecError(f"bad weight in {p!r}", ev.line, ev.column) from None
            variables.append((name, weight))
    names = [n for n, _ in variables]
    if len(set(names)) != len(names):
        raise SpecError("repeated variable", ev.line, ev.column)
    laurent = _names(d["laurent"]) if "laurent" in d else []
    for n in laurent:
        if n not in names:
            raise SpecError(f"laurent flag on unknown variable {n!r}", d["laurent"].line, d["laurent"].column)
    return polynomial_ring(variables, laurent)


def _parse_table(e: Entry, elements: list[str]) -> dict:
    table = {}
    for part in e.value.split(","):
        m = re.fullmatch(r"\s*(\w+)\s*\*\s*(\w+)\s*=\s*(\w+)\s*", part)
        if not m:
            raise SpecError(f"bad table entry {part.strip()!r}", e.line, e.column)
        table[m.group(1), m.group(2)] = m.group(3)
    return table


def _parse_group(entries):
    d = _single(entries, "group", {"class"}, {"order", "elements", "table", "rank", "names"})
    cls = d["class"].value
    try:
        if cls == "trivial":
            return build_hopf("finite-group", elements=["e"], table={("e", "e"): "e"})
        if cls == "cyclic":
            if "order" not in d:
                raise SpecError("cyclic group needs an order", d["class"].line, d["class"].column)
            els = _names(d["elements"]) if "elements" in d else None
            return build_hopf("finite-group", order=_int(d["order"]), elements=els)
        if cls == "finite":
            if "elements" not in d or "table" not in d:
                raise SpecError("finite group needs elements and table", d["class"].line, d["class"].column)
            els = _names(d["elements"])
            return build_hopf("finite-group", elements=els, table=_parse_table(d["table"], els))
        if cls in ("torus", "multiplicative"):
            rank = _int(d["rank"]) if "rank" in d else 1
            names = _names(d["names"]) if "names" in d else None
            if cls == "multiplicative" and rank != 1:
                raise SpecError("multiplicative group has rank 1", d["rank"].line, d["rank"].column)
            if names is not None and len(names) != rank:
                raise SpecError("number of names does not match the rank", d["names"].line, d["names"].column)
            return build_hopf("torus", rank=rank, names=names)
        if cls == "additive":
            names = _names(d["names"]) if "names" in d else ["t"]
            return build_hopf("additive", name=names[0])
    except HopfError as exc:
        raise SpecError(str(exc), d["class"].line, d["class"].column, kind="validation") from None
    raise SpecError(f"unknown group class {cls!r}", d["class"].line, d["class"].column)


def _parse_coaction(entries, A: GradedAlgebra, H) -> Coaction:
    if isinstance(H, FiniteGroupHopf):
        subs = {g: {} for g in H.elements}
        for e in entries:
            m = re.fullmatch(r"(\w+)\s*:\s*(\w+)", e.key)
            if not m:
                raise SpecError("finite-group coaction entries read 'g: x = polynomial'", e.line, 1)
            g, x = m.group(1), m.group(2)
            if g not in H.elements:
                raise SpecError(f"unknown group element {g!r}", e.line, 1)
            if x not in A.index:
                raise SpecError(f"unknown variable {x!r}", e.line, 1)
            if x in subs[g]:
                raise SpecError(f"duplicate entry for {g}: {x}", e.line, 1)
            subs[g][x] = parse_polynomial(e.value, A, e.line, e.column)
        images = {}
        for x in A.index:
            terms = {}
            for g in H.elements:
                val = subs[g].get(x, A.gen(x))
                for mono, c in val.terms.items():
                    terms[(mono, (g,))] = c
            images[x] = HTensor(A, H, terms)
        return Coaction(A, H, images)
    coords = list(H.coordinates)
    clash = set(coords) & set(A.index)
    if clash:
        raise SpecError(f"group coordinate names clash with variables: {sorted(clash)}")
    laurent = isinstance(H, TorusHopf)
    big = GradedAlgebra(list(A.generators) + [Generator(c, 0, 0, "field", laurent=laurent) for c in coords])
    images = {}
    for e in entries:
        if e.key not in A.index:
            raise SpecError(f"unknown variable {e.key!r}", e.line, 1)
        if e.key in images:
            raise SpecError(f"duplicate coaction entry for {e.key!r}", e.line, 1)
        val = parse_polynomial(e.value, big, e.line, e.column)
        terms = {}
        for mono, c in val.terms.items():
            terms[(mono[:A.n], (tuple(mono[A.n:]),))] = c
        images[e.key] = HTensor(A, H, terms)
    return Coaction(A, H, images)


def parse_spec(text: str, source: str = "") -> ProblemSpec:
    sections = parse_sections(text)
    for s in ("ring", "group", "function"):
        if s not in sections:
            raise SpecError(f"missing section [{s}]")
    A = _parse_ring(sections["ring"])
    H = _parse_group(sections["group"])
    co = _parse_coaction(sections.get("coaction", []), A, H)
    fd = _single(sections["function"], "function", {"f"}, set())
    f = parse_polynomial(fd["f"].value, A, fd["f"].line, fd["f"].column)
    weights = {}
    for e in sections.get("weights", []):
        if e.key in weights:
            raise SpecError(f"duplicate weight for {e.key!r}", e.line, 1)
        weights[e.key] = _int(e)
    tasks = [_parse_task(e) for e in sections.get("tasks", [])]
    name = Path(source).stem if source else ""
    problem = Problem(A, H, co, f, weights, name)
    return ProblemSpec(text, sections, problem, tasks, source)


TASKS = ("validate", "build", "cohomology", "vanest-compare", "symplectic-check")


def _parse_task(e: Entry) -> Task:
    if e.key not in TASKS:
        raise SpecError(f"unknown task {e.key!r}", e.line, 1)
    options = {}
    for part in e.value.split():
        k, sep, v = part.partition("=")
        if not sep:
            raise SpecError(f"task option {part!r} must read key=value", e.line, e.column)
        options[k] = v
    return Task(e.key, options, e.line)


def load_spec(path) -> ProblemSpec:
    p = Path(path)
    return parse_spec(p.read_text(encoding="utf-8"), str(p))


def parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise SpecError(f"bad range {text!r}; expected a..b")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise SpecError(f"empty range {text!r}")
    return a, b
