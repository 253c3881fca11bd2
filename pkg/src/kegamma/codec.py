"""Token-string coding of literals, clauses and conjunctive queries.

Tokens are separated by whitespace::

    V0{name} V1{name} V3{name}          variables of sort 0, 1, 3
    $FA                                 universal quantifier prefix
    $AD $OR $DA $RO                     and, or, nand, nor
    $IN $NI $EQ $QE                     in, not in, equals, not equals
    $OA $CO $AO                         pair brackets and comma

A part is ``($FA V0{z})* lit ($OR lit)*``; a pair literal reads
``$OA V0{a} $CO V0{b} $AO $IN V3{R}``.  A query is ``lit ($AD lit)*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .core import (
    FREE,
    QUANTIFIED,
    QUERY,
    And,
    Clause,
    Conjunction,
    Eq,
    FormulaError,
    Forall,
    In1,
    In3,
    Literal,
    Not,
    Or,
    Part,
    Var,
)

OPERATORS = ("$FA", "$AD", "$OR", "$DA", "$RO")
RELATORS = ("$IN", "$NI", "$EQ", "$QE")
PAIR = ("$OA", "$CO", "$AO")

_VAR_RE = re.compile(r"V([013])\{([^{}\s]+)\}\Z")


class CodecError(FormulaError):
    def __init__(self, message, position):
        super().__init__(f"{message} at token {position}")
        self.position = position


class LexError(CodecError):
    pass


class ParseError(CodecError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "var" or the operator itself
    text: str
    pos: int
    sort: int = -1
    name: str = ""


def tokenize(text: str) -> list[Token]:
    out = []
    for pos, raw in enumerate(text.split()):
        if raw in OPERATORS or raw in RELATORS or raw in PAIR:
            out.append(Token(raw, raw, pos))
            continue
        m = _VAR_RE.match(raw)
        if not m:
            raise LexError(f"unknown token {raw!r}", pos)
        out.append(Token("var", raw, pos, int(m.group(1)), m.group(2)))
    return out


def _var_token(v: Var) -> str:
    if any(c.isspace() or c in "{}" for c in v.name):
        raise FormulaError(f"variable name {v.name!r} cannot be coded")
    return f"V{v.sort}{{{v.name}}}"


def encode_literal(lit: Literal) -> str:
    a = lit.atom
    if isinstance(a, Eq):
        op = "$EQ" if lit.positive else "$QE"
        return f"{_var_token(a.left)} {op} {_var_token(a.right)}"
    op = "$IN" if lit.positive else "$NI"
    if isinstance(a, In1):
        return f"{_var_token(a.elem)} {op} {_var_token(a.set)}"
    return (f"$OA {_var_token(a.left)} $CO {_var_token(a.right)} $AO "
            f"{op} {_var_token(a.rel)}")


def encode(part: Part) -> str:
    if isinstance(part, Literal):
        return encode_literal(part)
    prefix = " ".join(f"$FA {_var_token(v)}" for v in part.qvars)
    body = " $OR ".join(encode_literal(l) for l in part.disjuncts)
    return f"{prefix} {body}" if prefix else body


def encode_conjunction(conj: Conjunction | Iterable[Part]) -> str:
    """One part per line."""
    return "\n".join(encode(p) for p in conj)


def encode_query(lits: Iterable[Literal]) -> str:
    return " $AD ".join(encode_literal(l) for l in lits)


class _Reader:
    def __init__(self, text, resolve):
        self.toks = tokenize(text)
        self.i = 0
        self.resolve = resolve
        self.bound: dict[str, Var] = {}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind=None):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", self.i)
        if kind is not None and t.kind != kind:
            raise ParseError(f"expected {kind}, got {t.text!r}", t.pos)
        self.i += 1
        return t

    def var(self, sort):
        t = self.take("var")
        if t.sort != sort:
            raise ParseError(f"expected a sort-{sort} variable, got {t.text}", t.pos)
        if sort == 0 and t.name in self.bound:
            return self.bound[t.name]
        return self.resolve(t.sort, t.name)

    def prefix(self):
        qs = []
        while self.peek() is not None and self.peek().kind == "$FA":
            self.take()
            t = self.take("var")
            if t.sort != 0:
                raise ParseError("only sort-0 variables can be quantified", t.pos)
            if t.name in self.bound:
                raise ParseError(f"{t.name} quantified twice", t.pos)
            v = Var(0, t.name, QUANTIFIED, len(self.bound))
            self.bound[t.name] = v
            qs.append(v)
        return qs

    def literal(self):
        t = self.peek()
        if t is None:
            raise ParseError("expected a literal", self.i)
        if t.kind == "$OA":
            self.take()
            x = self.var(0)
            self.take("$CO")
            y = self.var(0)
            self.take("$AO")
            rel = self.take()
            if rel.kind not in ("$IN", "$NI"):
                raise ParseError(f"pair terms take $IN or $NI, got {rel.text}", rel.pos)
            return Literal(In3(x, y, self.var(3)), rel.kind == "$IN")
        if t.kind != "var":
            raise ParseError(f"expected a literal, got {t.text!r}", t.pos)
        x = self.var(0)
        rel = self.take()
        if rel.kind in ("$EQ", "$QE"):
            return Literal(Eq(x, self.var(0)), rel.kind == "$EQ")
        if rel.kind in ("$IN", "$NI"):
            return Literal(In1(x, self.var(1)), rel.kind == "$IN")
        raise ParseError(f"expected a relator, got {rel.text!r}", rel.pos)

    def done(self):
        t = self.peek()
        if t is not None:
            raise ParseError(f"trailing token {t.text!r}", t.pos)


class Resolver:
    """Maps (sort, name) to variables, assigning ordinals by first sight.

    ``known`` pre-populates the table; ``unknown`` decides the binding of a
    name seen for the first time (``FREE`` for knowledge bases, ``QUERY``
    when reading a query against a fixed knowledge base).
    """

    def __init__(self, known: Iterable[Var] = (), unknown: str = FREE):
        self.table: dict[tuple[int, str], Var] = {}
        self.counts = {0: 0, 1: 0, 3: 0}
        self.unknown = unknown
        for v in known:
            self.table[(v.sort, v.name)] = v
            self.counts[v.sort] = max(self.counts[v.sort], v.ordinal + 1)

    def __call__(self, sort, name):
        key = (sort, name)
        if key not in self.table:
            self.table[key] = Var(sort, name, self.unknown, self.counts[sort])
            self.counts[sort] += 1
        return self.table[key]


def decode(text: str, resolve: Resolver | None = None) -> Part:
    """Inverse of :func:`encode` for a single part."""
    r = _Reader(text, resolve or Resolver())
    qs = r.prefix()
    lits = [r.literal()]
    while r.peek() is not None and r.peek().kind == "$OR":
        r.take()
        lits.append(r.literal())
    r.done()
    if not qs and len(lits) == 1:
        return lits[0]
    try:
        return Clause(tuple(qs), tuple(lits))
    except FormulaError as e:
        raise ParseError(str(e), 0) from e


def decode_conjunction(text: str, resolve: Resolver | None = None) -> Conjunction:
    resolve = resolve or Resolver()
    parts = [decode(line, resolve) for line in text.splitlines()
             if line.strip() and not line.lstrip().startswith("#")]
    return Conjunction(tuple(parts))


def decode_query(text: str, resolve: Resolver) -> list[Literal]:
    """A conjunction of literals joined by ``$AD``; empty text is the empty query."""
    r = _Reader(text, resolve)
    lits = []
    if r.peek() is None:
        return lits
    lits.append(r.literal())
    while r.peek() is not None:
        r.take("$AD")
        lits.append(r.literal())
    return lits


def decode_formula(text: str, resolve: Resolver | None = None):
    """Read a general line into a raw formula tree for :func:`normalize_cnf`.

    ``$AD``/``$DA`` bind looser than ``$OR``/``$RO``; both are
    left-associative, and ``a $DA b`` stands for the negated conjunction.
    """
    r = _Reader(text, resolve or Resolver())
    qs = r.prefix()

    def disj():
        f = r.literal()
        while r.peek() is not None and r.peek().kind in ("$OR", "$RO"):
            op = r.take().kind
            g = r.literal()
            f = Or(f, g) if op == "$OR" else Not(Or(f, g))
        return f

    f = disj()
    while r.peek() is not None and r.peek().kind in ("$AD", "$DA"):
        op = r.take().kind
        g = disj()
        f = And(f, g) if op == "$AD" else Not(And(f, g))
    r.done()
    return Forall(qs, f) if qs else f


__all__ = [
    "CodecError", "LexError", "ParseError", "Resolver", "tokenize", "encode",
    "encode_literal", "encode_conjunction", "encode_query", "decode",
    "decode_conjunction", "decode_query", "decode_formula", "QUERY",
]
