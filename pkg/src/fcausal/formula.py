"""Propositional formulas: AST, rendering, length, parsing and compilation.

Grammar (lowest to highest precedence)::

    iff   := imp ('<->' imp)*
    imp   := or ('->' imp)?          right associative
    or    := and ('|' and)*
    and   := unary ('&' unary)*
    unary := '!' unary | '(' iff ')' | 'true' | 'false' | IDENT

``->`` and ``<->`` are desugared while parsing, so trees only contain
constants, literals, negation, conjunction and disjunction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .bdd import FALSE, TRUE
from .configspace import ConfigSet, FeatureSpace, PartialConfig
from .errors import ParseError


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Lit:
    name: str
    positive: bool = True


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


Formula = Union[Const, Lit, Not, And, Or]
TRUE_F = Const(True)
FALSE_F = Const(False)


def conj(parts) -> Formula:
    """Flattening n-ary conjunction; empty means ``true``."""
    flat = []
    for p in parts:
        flat.extend(p.children if isinstance(p, And) else (p,))
    if not flat:
        return TRUE_F
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(parts) -> Formula:
    """Flattening n-ary disjunction; empty means ``false``."""
    flat = []
    for p in parts:
        flat.extend(p.children if isinstance(p, Or) else (p,))
    if not flat:
        return FALSE_F
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def length(f: Formula) -> int:
    """Formula length: atoms count 1, negation adds 1, each binary connective adds 1.

    An n-ary node counts as the left fold of binary ones.
    """
    if isinstance(f, Const):
        return 1
    if isinstance(f, Lit):
        return 1 if f.positive else 2
    if isinstance(f, Not):
        return length(f.child) + 1
    return sum(length(c) for c in f.children) + len(f.children) - 1


_PREC = {Or: 1, And: 2}


def render(f: Formula) -> str:
    """Render with ``!``, ``&``, ``|`` and minimal parentheses."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Lit):
        return f.name if f.positive else "!" + f.name
    if isinstance(f, Not):
        inner = render(f.child)
        if isinstance(f.child, (And, Or)):
            inner = f"({inner})"
        return "!" + inner
    op = " & " if isinstance(f, And) else " | "
    out = []
    for c in f.children:
        s = render(c)
        if isinstance(c, (And, Or)) and _PREC[type(c)] <= _PREC[type(f)]:
            s = f"({s})"
        out.append(s)
    return op.join(out)


def cube_formula(p: PartialConfig) -> Formula:
    names = p.space.names
    return conj([Lit(names[i], neg == 0) for i, neg in p.literal_seq()])


def to_configset(f: Formula, space: FeatureSpace) -> ConfigSet:
    return ConfigSet(space, _compile(f, space))


def _compile(f: Formula, space: FeatureSpace) -> int:
    bdd = space.bdd
    if isinstance(f, Const):
        return TRUE if f.value else FALSE
    if isinstance(f, Lit):
        return bdd.literal(space.position(f.name), f.positive)
    if isinstance(f, Not):
        return bdd.negate(_compile(f.child, space))
    if isinstance(f, And):
        u = TRUE
        for c in f.children:
            u = bdd.conj(u, _compile(c, space))
            if u == FALSE:
                break
        return u
    u = FALSE
    for c in f.children:
        u = bdd.disj(u, _compile(c, space))
        if u == TRUE:
            break
    return u


def evaluate(f: Formula, values) -> bool:
    """Evaluate under a mapping ``name -> bool`` (missing names are false)."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Lit):
        return bool(values.get(f.name, False)) == f.positive
    if isinstance(f, Not):
        return not evaluate(f.child, values)
    if isinstance(f, And):
        return all(evaluate(c, values) for c in f.children)
    return any(evaluate(c, values) for c in f.children)


def variables(f: Formula) -> set[str]:
    if isinstance(f, Lit):
        return {f.name}
    if isinstance(f, Not):
        return variables(f.child)
    if isinstance(f, (And, Or)):
        return set().union(*(variables(c) for c in f.children))
    return set()


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)


class _Parser:
    def __init__(self, text: str, space: FeatureSpace | None, line: int, col: int):
        self.text, self.line0, self.col0 = text, line, col
        self.space = space
        self.toks: list[tuple[str, str, int, int]] = []
        for m in _TOKEN.finditer(text):
            kind = m.lastgroup
            ln, column = self.where(m.start(kind))
            if kind == "bad":
                raise ParseError(f"unexpected character {m.group(kind)!r}", ln, column)
            self.toks.append((kind, m.group(kind), ln, column))
        self.end = self.where(len(text.rstrip()))
        self.i = 0

    def where(self, offset: int) -> tuple[int, int]:
        nl = self.text.rfind("\n", 0, offset)
        line = self.line0 + self.text.count("\n", 0, offset)
        col = offset - nl if nl >= 0 else self.col0 + offset
        return line, col

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str):
        tok = self.peek()
        line, col = (tok[2], tok[3]) if tok else self.end
        raise ParseError(msg, line, col)

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == value:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        if not self.toks:
            self.error("empty expression")
        f = self.iff()
        if self.peek() is not None:
            self.error(f"unexpected token {self.peek()[1]!r}")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            g = self.imp()
            f = disj([conj([f, g]), conj([negate(f), negate(g)])])
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.accept("->"):
            g = self.imp()
            return disj([negate(f), g])
        return f

    def or_(self) -> Formula:
        parts = [self.and_()]
        while self.accept("|"):
            parts.append(self.and_())
        return disj(parts) if len(parts) > 1 else parts[0]

    def and_(self) -> Formula:
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return conj(parts) if len(parts) > 1 else parts[0]

    def unary(self) -> Formula:
        if self.accept("!"):
            return negate(self.unary())
        if self.accept("("):
            f = self.iff()
            if not self.accept(")"):
                self.error("expected ')'")
            return f
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        kind, value, line, col = tok
        if kind != "id":
            self.error(f"unexpected token {value!r}")
        self.i += 1
        if value == "true":
            return TRUE_F
        if value == "false":
            return FALSE_F
        if self.space is not None and value not in self.space:
            raise ParseError(f"unknown feature {value!r}", line, col, code="unknown-feature")
        return Lit(value)


def negate(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Lit):
        return Lit(f.name, not f.positive)
    if isinstance(f, Not):
        return f.child
    return Not(f)


def parse_expression(text: str, space: FeatureSpace | None = None, *, line: int = 1, column: int = 1) -> Formula:
    """Parse an expression; identifiers are checked against ``space`` if given."""
    return _Parser(text, space, line, column).parse()
