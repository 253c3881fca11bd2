"""Reading queries typed by a user.

Two notations are accepted.  The internal coding (anything containing a
``$`` token) and a compact mathematical one mirroring the printed form of
translated literals::

    query   ::= "λ" | "" | literal (AND literal)*
    AND     ::= "∧" | "&" | "and"
    literal ::= NOT? atom
              | term ("∉" | "notin") set
              | term ("≠" | "!=") term
    NOT     ::= "¬" | "!" | "not"
    atom    ::= PAIR ("∈" | "in") rel | term ("∈" | "in") set | term "=" term
    PAIR    ::= ("⟨" | "<") term "," term ("⟩" | ">")
    term    ::= "x_" NAME | NAME | "?" NAME
    set     ::= ("X¹_" | "X1_") NAME | "?" NAME
    rel     ::= ("X³_" | "X3_") NAME | "?" NAME

A name that the knowledge base does not know, or any name written with a
leading ``?``, is a query variable.  ``?pool:name`` picks the variable pool
explicitly (``i``, ``e``, ``c``, ``d``, ``ar``, ``cr``).
"""

from __future__ import annotations

import re

from . import codec
from .core import FormulaError, Literal, Var, eq, member, pair_member
from .dl import POOLS, QVar
from .translate import POOL_SORT

DEFAULT_POOL = {0: "i", 1: "c", 3: "ar"}

_TOKEN = re.compile(r"""
    \s*(
      ⟨|⟩|<|>|,|∧|&|¬|!=|!|≠|∉|∈|=|λ
    | \?(?:[a-z]+:)?[^\s,⟨⟩<>=∈∉≠∧&]+
    | X(?:¹|³|1|3)_[^\s,⟨⟩<>=∈∉≠∧&]+
    | [^\s,⟨⟩<>=∈∉≠∧&!¬]+
    )""", re.VERBOSE)


class QuerySyntaxError(FormulaError):
    pass


def _tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise QuerySyntaxError(f"cannot read query at character {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, lookup):
        self.toks = _tokens(text)
        self.i = 0
        self.lookup = lookup

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, *expect):
        t = self.peek()
        if t is None or (expect and t not in expect):
            raise QuerySyntaxError(f"expected {' or '.join(expect) or 'a token'} at token {self.i}, "
                                   f"got {t!r}")
        self.i += 1
        return t

    def var(self, sort, token):
        if token.startswith("?"):
            body = token[1:]
            pool = DEFAULT_POOL[sort]
            if ":" in body:
                pool, body = body.split(":", 1)
                if pool not in POOLS:
                    raise QuerySyntaxError(f"unknown variable pool {pool!r}")
                if POOL_SORT[pool] != sort:
                    raise QuerySyntaxError(f"pool {pool!r} cannot stand at a sort-{sort} position")
            return self.lookup(sort, body, pool, force=True)
        name = token
        if sort == 0 and name.startswith("x_"):
            name = name[2:]
        elif sort == 1:
            name = re.sub(r"^X(?:¹|1)_", "", name)
        elif sort == 3:
            name = re.sub(r"^X(?:³|3)_", "", name)
        return self.lookup(sort, name, DEFAULT_POOL[sort], force=False)

    def term(self):
        t = self.take()
        if t in "⟨⟩<>,∧&¬!=≠∉∈λ":
            raise QuerySyntaxError(f"expected a term at token {self.i - 1}, got {t!r}")
        return self.var(0, t)

    def literal(self):
        positive = True
        while self.peek() in ("¬", "!", "not"):
            self.take()
            positive = not positive
        if self.peek() in ("⟨", "<"):
            close = "⟩" if self.take() == "⟨" else ">"
            x = self.term()
            self.take(",")
            y = self.term()
            self.take(close)
            op = self.take("∈", "in", "∉", "notin")
            rel = self.var(3, self.take())
            return pair_member(x, y, rel, positive == (op in ("∈", "in")))
        x = self.term()
        op = self.take("∈", "in", "∉", "notin", "=", "≠", "!=")
        if op in ("=", "≠", "!="):
            return eq(x, self.term(), positive == (op == "="))
        return member(x, self.var(1, self.take()), positive == (op in ("∈", "in")))

    def query(self):
        if self.peek() in (None, "λ"):
            if self.peek() == "λ":
                self.take()
            self.done()
            return []
        lits = [self.literal()]
        while self.peek() in ("∧", "&", "and"):
            self.take()
            lits.append(self.literal())
        self.done()
        return lits

    def done(self):
        if self.peek() is not None:
            raise QuerySyntaxError(f"trailing token {self.peek()!r} at token {self.i}")


def parse_query(text: str, known, markers=None) -> list[Literal]:
    """Marked 4LQS literals for ``text``.

    ``known`` maps ``(sort, name)`` to the knowledge base's variables;
    ``markers`` (optional) is called as ``markers(QVar, sort)`` to obtain the
    marker variable, so that a symbol table can record the pool.
    """
    def lookup(sort, name, pool, force):
        if not force:
            v = known.get((sort, name))
            if v is not None:
                return v
        q = QVar(name, pool)
        return markers(q, sort) if markers else Var(sort, name, "query")

    if "$" in text:
        resolve = codec.Resolver(unknown="query")
        resolve.table.update(known)
        lits = codec.decode_query(text, resolve)
        if markers:
            swap = {v: markers(QVar(v.name, DEFAULT_POOL[v.sort]), v.sort)
                    for l in lits for v in l.vars if v.is_query}
            lits = [Literal(l.atom.rebuild(tuple(swap.get(v, v) for v in l.atom.args)),
                            l.positive) for l in lits]
        return lits
    return _Parser(text, lookup).query()
