"""
Text format for Sullivan models.

    # comment
    gen x1 4
    gen y1 7
    d y1 = x1^2

One declaration per line.  ``d`` lines may refer to generators declared on
any line; generators without a ``d`` line have zero differential.
Expressions are sums of ``*``-separated factors, where a factor is a
generator, ``name^k``, an integer, or a rational ``a/b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import Element, GradedAlgebra
from .model import SullivanModel

NAME_RE = r"[A-Za-z_][A-Za-z0-9_']*"
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>%s)|(?P<op>[-+*/^]))" % NAME_RE)


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = "line %d, column %d: " % (line, column) if line else ""
        super().__init__(where + message)


def _tokenize(text: str, line: int, offset: int):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            col = offset + pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise DSLError("unexpected character %r" % text[pos:].lstrip()[:1], line, col)
        kind = mt.lastgroup
        col = offset + mt.start(kind) + 1
        toks.append((kind, mt.group(kind), col))
        pos = mt.end()
    return toks


def parse_expr(text: str, algebra: GradedAlgebra, line: int = 0, offset: int = 0) -> Element:
    toks = _tokenize(text, line, offset)
    if not toks:
        raise DSLError("empty expression", line, offset + 1)
    i = 0
    total = algebra.zero()

    def peek():
        return toks[i] if i < len(toks) else (None, None, offset + len(text) + 1)

    def number():
        nonlocal i
        kind, val, col = peek()
        if kind != "num":
            raise DSLError("expected a number", line, col)
        i += 1
        q = Fraction(int(val))
        if peek()[1] == "/":
            i += 1
            kind, val, col = peek()
            if kind != "num":
                raise DSLError("expected a denominator", line, col)
            if int(val) == 0:
                raise DSLError("division by zero", line, col)
            i += 1
            q /= int(val)
        return q

    def factor():
        nonlocal i
        kind, val, col = peek()
        if kind == "num":
            return algebra.scalar(number())
        if kind == "name":
            i += 1
            if val not in algebra.index:
                raise DSLError("unknown generator %r" % val, line, col)
            g = algebra.generators[algebra.index[val]]
            e = 1
            if peek()[1] == "^":
                i += 1
                k2, v2, c2 = peek()
                if k2 != "num":
                    raise DSLError("expected an exponent", line, c2)
                i += 1
                e = int(v2)
            if g.odd and e > 1:
                raise DSLError("odd generator %s cannot be raised to power %d" % (val, e), line, col)
            return algebra.gen(val) ** e
        raise DSLError("expected a generator or number", line, col)

    def term():
        nonlocal i
        acc = factor()
        while peek()[1] == "*":
            i += 1
            acc = acc * factor()
        return acc

    sign = 1
    if peek()[1] in "+-" and peek()[0] == "op":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        total = total + sign * term()
        kind, val, col = peek()
        if kind is None:
            break
        if val not in ("+", "-"):
            raise DSLError("unexpected %r" % val, line, col)
        sign = -1 if val == "-" else 1
        i += 1
    return total


@dataclass
class ModelDocument:
    source: str
    model: SullivanModel
    spans: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, ModelDocument) and same_model(self.model, other.model)


def same_model(a, b) -> bool:
    return a.algebra == b.algebra and a.differential == b.differential


_GEN_LINE = re.compile(r"^gen\s+(%s)\s+(-?\d+)\s*$" % NAME_RE)
_D_LINE = re.compile(r"^d\s+(%s)\s*=\s*(.*)$" % NAME_RE)


def parse(text: str, name: str = "") -> ModelDocument:
    gens: List[Tuple[str, int]] = []
    spans: Dict[str, Tuple[int, int]] = {}
    dlines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        mg = _GEN_LINE.match(stripped)
        if mg:
            gname, deg = mg.group(1), int(mg.group(2))
            if gname in spans:
                raise DSLError("duplicate generator %r" % gname, lineno, indent + mg.start(1) + 1)
            if deg < 1:
                raise DSLError("degree must be positive", lineno, indent + mg.start(2) + 1)
            gens.append((gname, deg))
            spans[gname] = (lineno, indent + 1)
            continue
        md = _D_LINE.match(stripped)
        if md:
            dlines.append((lineno, indent, md))
            continue
        raise DSLError("expected 'gen <name> <degree>' or 'd <name> = <expr>'", lineno, indent + 1)
    algebra = GradedAlgebra(gens)
    diff: Dict[str, Element] = {}
    for lineno, indent, md in dlines:
        gname = md.group(1)
        col = indent + md.start(1) + 1
        if gname not in algebra.index:
            raise DSLError("unknown generator %r" % gname, lineno, col)
        if gname in diff:
            raise DSLError("second differential for %r" % gname, lineno, col)
        value = parse_expr(md.group(2), algebra, lineno, indent + md.start(2))
        g = algebra.generators[algebra.index[gname]]
        degs = value.degrees()
        if degs and degs != {g.degree + 1}:
            raise DSLError("d(%s) must have degree %d, got %s" % (
                gname, g.degree + 1, ",".join(str(x) for x in sorted(degs))), lineno, indent + md.start(2) + 1)
        diff[gname] = value
    return ModelDocument(text, SullivanModel(algebra, diff, name=name), spans)


def print_model(model, header: Optional[str] = None) -> str:
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    for g in model.generators:
        lines.append("gen %s %d" % (g.name, g.degree))
    for g, v in zip(model.generators, model.differential):
        if v:
            lines.append("d %s = %s" % (g.name, v))
    return "\n".join(lines) + "\n"


def load(path) -> ModelDocument:
    from pathlib import Path

    p = Path(path)
    return parse(p.read_text(encoding="utf-8"), name=p.stem)
