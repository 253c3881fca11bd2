"""Translation of knowledge bases and queries into set-theoretic clauses.

Individuals and data constants become sort-0 variables, concepts and data
type terms sort-1 variables, roles sort-3 variables.  A compound term gets
its own set variable, named by :func:`kegamma.dl.canonical`, together with
definition clauses that pin its extension down; each distinct term is
defined once.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from . import dl
from .core import (
    FREE,
    QUANTIFIED,
    QUERY,
    And,
    Conjunction,
    FormulaError,
    Forall,
    Literal,
    Or,
    Var,
    eq,
    member,
    normalize_cnf,
    pair_member,
)
from .dl import (
    AllValues,
    Bottom,
    Concept,
    ConceptAssertion,
    ConceptAtom,
    ConceptEquivalence,
    ConceptInclusion,
    ConcreteRole,
    Conj,
    Constant,
    DataOneOf,
    DataRange,
    DifferentIndividuals,
    Disj,
    DisjointRoles,
    DomainRestriction,
    EqualityAtom,
    HasValue,
    HOLiteral,
    HOQuery,
    HOSubstitution,
    IdentityRole,
    Inverse,
    KnowledgeBase,
    MaxCard,
    MinCard,
    Neg,
    Nominal,
    Product,
    QVar,
    RangeRestriction,
    Restriction,
    RoleAssertion,
    RoleAtom,
    RoleChain,
    RoleEquivalence,
    RoleInclusion,
    RoleName,
    RoleProperty,
    Rule,
    SameIndividual,
    SelfRestriction,
    SomeValues,
    Top,
    UniversalRole,
)

log = logging.getLogger(__name__)

# Kinds of symbols recorded in the table.
INDIVIDUAL = "individual"
CONSTANT = "constant"
CONCEPT_NAME = "concept"
DATATYPE_NAME = "datatype"
ROLE_NAME = "role"
CROLE_NAME = "crole"
AUX = "aux"
BUILTIN = "builtin"

POOL_KIND = {"i": INDIVIDUAL, "e": CONSTANT, "c": CONCEPT_NAME, "d": DATATYPE_NAME,
             "ar": ROLE_NAME, "cr": CROLE_NAME}
POOL_SORT = {"i": 0, "e": 0, "c": 1, "d": 1, "ar": 3, "cr": 3}


class TranslationError(FormulaError):
    pass


class UnknownName(TranslationError):
    pass


@dataclass
class SymbolTable:
    """Injective map from names and terms to variables, per sort."""

    by_key: dict = field(default_factory=dict)     # (sort, name) -> Var
    term_of: dict = field(default_factory=dict)    # Var -> name / term
    kind_of: dict = field(default_factory=dict)    # Var -> kind
    query_vars: dict = field(default_factory=dict) # Var -> QVar
    counts: dict = field(default_factory=lambda: {0: 0, 1: 0, 3: 0})

    def intern(self, sort, name, term, kind):
        key = (sort, name)
        v = self.by_key.get(key)
        if v is not None:
            if self.term_of[v] != term:
                raise TranslationError(
                    f"name clash: {term!s} and {self.term_of[v]!s} both map to {name}")
            return v, False
        v = Var(sort, name, FREE, self.counts[sort])
        self.counts[sort] += 1
        self.by_key[key] = v
        self.term_of[v] = term
        self.kind_of[v] = kind
        return v, True

    def lookup(self, sort, name):
        return self.by_key.get((sort, name))

    def vars_of_kind(self, *kinds):
        return [v for v, k in self.kind_of.items() if k in kinds]

    def marker(self, q: QVar) -> Var:
        v = Var(POOL_SORT[q.pool], q.name, QUERY)
        prev = self.query_vars.setdefault(v, q)
        if prev != q:
            raise TranslationError(f"query variable {q.name} used in two pools")
        return v

    def name_of(self, v: Var):
        t = self.term_of.get(v)
        if t is None:
            return v.name
        return t

    def allows(self, marker: Var, target: Var) -> bool:
        """Whether a query marker may be bound to ``target``."""
        q = self.query_vars.get(marker)
        if q is None:
            return True
        return self.kind_of.get(target) == POOL_KIND[q.pool]

    def back(self, binding: dict) -> HOSubstitution:
        """Translate marker bindings back into a substitution over names."""
        out = {}
        for m, v in binding.items():
            q = self.query_vars.get(m)
            if q is None:
                continue
            t = self.term_of.get(v, v.name)
            out[q] = t.name if hasattr(t, "name") and not isinstance(t, Constant) else t
        return HOSubstitution.of(out)


_zs = itertools.count()


def _fresh(n=1):
    return tuple(Var(0, f"_q{next(_zs)}", QUANTIFIED) for _ in range(n))


def _forall(vs, *lits):
    body = lits[0] if len(lits) == 1 else Or(*lits)
    return Forall(vs, body) if vs else body


def _neg(lit: Literal) -> Literal:
    return Literal(lit.atom, not lit.positive)


class Translator:
    """Stateful translator: one symbol table and the definitions it needed.

    >>> tr = Translator(kb)                       # doctest: +SKIP
    >>> phi = tr.phi()                            # doctest: +SKIP
    """

    def __init__(self, kb: KnowledgeBase | None = None):
        self.st = SymbolTable()
        self.definitions: list = []
        self.images: list = []
        self.kb = kb
        if kb is not None:
            self._declare(kb.signature)
            for s in kb.abox:
                self.images.append(self.assertion(s))
            for s in kb.rbox + kb.tbox + kb.rules:
                self.images.extend(self.axiom(s))

    def _declare(self, sig: dl.Signature):
        for a in sig.individuals:
            self.st.intern(0, a, a, INDIVIDUAL)
        for e in sig.constants:
            self.st.intern(0, e.name, e, CONSTANT)
        for c in sig.concepts:
            self.st.intern(1, c, dl.Concept(c), CONCEPT_NAME)
        for d in sig.datatypes:
            self.st.intern(1, d, dl.DataRange(d), DATATYPE_NAME)
        for r in sig.roles:
            self.st.intern(3, r, dl.RoleName(r), ROLE_NAME)
        for p in sig.concrete_roles:
            self.st.intern(3, p, dl.ConcreteRole(p), CROLE_NAME)

    def phi(self) -> Conjunction:
        """Clausal form of everything translated so far."""
        return normalize_cnf(And(*self.images, *self.definitions))

    # -- names and terms ---------------------------------------------------

    def individual(self, a) -> Var:
        if isinstance(a, QVar):
            return self.st.marker(a)
        if isinstance(a, Constant):
            v, _ = self.st.intern(0, a.name, a, CONSTANT)
            return v
        v, _ = self.st.intern(0, a, a, INDIVIDUAL)
        return v

    def set_of(self, term) -> Var:
        if isinstance(term, QVar):
            return self.st.marker(term)
        if isinstance(term, Concept):
            return self.st.intern(1, term.name, term, CONCEPT_NAME)[0]
        if isinstance(term, DataRange):
            return self.st.intern(1, term.name, term, DATATYPE_NAME)[0]
        if isinstance(term, (Top, Bottom)):
            v, new = self.st.intern(1, dl.canonical(term), term, BUILTIN)
            if new:
                z, = _fresh()
                self.definitions.append(Forall((z,), member(z, v, isinstance(term, Top))))
            return v
        v, new = self.st.intern(1, dl.canonical(term), term, AUX)
        if new:
            self.definitions.extend(self._define_set(v, term))
        return v

    def rel_of(self, term) -> Var:
        if isinstance(term, QVar):
            return self.st.marker(term)
        if isinstance(term, RoleName):
            return self.st.intern(3, term.name, term, ROLE_NAME)[0]
        if isinstance(term, ConcreteRole):
            return self.st.intern(3, term.name, term, CROLE_NAME)[0]
        if isinstance(term, UniversalRole):
            v, new = self.st.intern(3, "U", term, BUILTIN)
            if new:
                z1, z2 = _fresh(2)
                self.definitions.append(Forall((z1, z2), pair_member(z1, z2, v)))
            return v
        v, new = self.st.intern(3, dl.canonical(term), term, AUX)
        if new:
            self.definitions.extend(self._define_rel(v, term))
        return v

    def _define_set(self, t: Var, term):
        z, = _fresh()
        inn = lambda s: member(z, s)
        out = lambda s: member(z, s, False)
        if isinstance(term, Neg):
            c = self.set_of(term.arg)
            return [_forall((z,), inn(t), inn(c)), _forall((z,), out(t), out(c))]
        if isinstance(term, Conj):
            cs = [self.set_of(a) for a in term.args]
            return ([_forall((z,), out(t), inn(c)) for c in cs]
                    + [_forall((z,), *[out(c) for c in cs], inn(t))])
        if isinstance(term, Disj):
            cs = [self.set_of(a) for a in term.args]
            return ([_forall((z,), out(t), *[inn(c) for c in cs])]
                    + [_forall((z,), out(c), inn(t)) for c in cs])
        if isinstance(term, (Nominal, DataOneOf)):
            elems = term.individuals if isinstance(term, Nominal) else term.constants
            xs = [self.individual(a) for a in elems]
            return [member(x, t) for x in xs] + [_forall((z,), out(t), *[eq(z, x) for x in xs])]
        if isinstance(term, SelfRestriction):
            r = self.rel_of(term.role)
            return [_forall((z,), out(t), pair_member(z, z, r)),
                    _forall((z,), pair_member(z, z, r, False), inn(t))]
        if isinstance(term, HasValue):
            r = self.rel_of(term.role)
            x = self.individual(term.value)
            return [_forall((z,), out(t), pair_member(z, x, r)),
                    _forall((z,), pair_member(z, x, r, False), inn(t))]
        raise TranslationError(f"unsupported concept term {term}")

    def _define_rel(self, t: Var, term):
        z1, z2 = _fresh(2)
        zz = (z1, z2)
        pin = lambda r: pair_member(z1, z2, r)
        pout = lambda r: pair_member(z1, z2, r, False)
        if isinstance(term, Inverse):
            r = self.rel_of(term.role)
            return [_forall(zz, pout(t), pair_member(z2, z1, r)),
                    _forall(zz, pair_member(z2, z1, r, False), pin(t))]
        if isinstance(term, Neg):
            r = self.rel_of(term.arg)
            return [_forall(zz, pin(t), pin(r)), _forall(zz, pout(t), pout(r))]
        if isinstance(term, Conj):
            rs = [self.rel_of(a) for a in term.args]
            return ([_forall(zz, pout(t), pin(r)) for r in rs]
                    + [_forall(zz, *[pout(r) for r in rs], pin(t))])
        if isinstance(term, Disj):
            rs = [self.rel_of(a) for a in term.args]
            return ([_forall(zz, pout(t), *[pin(r) for r in rs])]
                    + [_forall(zz, pout(r), pin(t)) for r in rs])
        if isinstance(term, (DomainRestriction, RangeRestriction, Restriction)):
            r = self.rel_of(term.role)
            conds = []
            if isinstance(term, (DomainRestriction, Restriction)):
                conds.append(member(z1, self.set_of(term.concept)))
            if isinstance(term, (RangeRestriction, Restriction)):
                conds.append(member(z2, self.set_of(term.filler)))
            return ([_forall(zz, pout(t), pin(r))]
                    + [_forall(zz, pout(t), c) for c in conds]
                    + [_forall(zz, pout(r), *[_neg(c) for c in conds], pin(t))])
        if isinstance(term, IdentityRole):
            c = self.set_of(term.concept)
            z, = _fresh()
            return [_forall(zz, pout(t), eq(z1, z2)),
                    _forall(zz, pout(t), member(z1, c)),
                    _forall((z,), member(z, c, False), pair_member(z, z, t))]
        if isinstance(term, Product):
            return self._product(t, term)
        raise TranslationError(f"unsupported role term {term}")

    def _product(self, r: Var, term: Product):
        c1, c2 = self.set_of(term.left), self.set_of(term.right)
        z1, z2 = _fresh(2)
        zz = (z1, z2)
        return [_forall(zz, pair_member(z1, z2, r, False), member(z1, c1)),
                _forall(zz, pair_member(z1, z2, r, False), member(z2, c2)),
                _forall(zz, member(z1, c1, False), member(z2, c2, False),
                        pair_member(z1, z2, r))]

    # -- statements ------------------------------------------------------------

    def assertion(self, s) -> Literal:
        if isinstance(s, ConceptAssertion):
            c, pos = _strip_neg(s.concept, s.positive)
            return member(self.individual(s.individual), self.set_of(c), pos)
        if isinstance(s, RoleAssertion):
            r, pos = _strip_neg(s.role, s.positive)
            return pair_member(self.individual(s.subject), self.individual(s.object),
                               self.rel_of(r), pos)
        if isinstance(s, SameIndividual):
            return eq(self.individual(s.left), self.individual(s.right))
        if isinstance(s, DifferentIndividuals):
            return eq(self.individual(s.left), self.individual(s.right), False)
        raise TranslationError(f"not an assertion: {s!r}")

    def axiom(self, s) -> list:
        if isinstance(s, ConceptInclusion):
            return self._inclusion(s.sub, s.sup)
        if isinstance(s, ConceptEquivalence):
            return self._inclusion(s.left, s.right) + self._inclusion(s.right, s.left)
        if isinstance(s, RoleEquivalence):
            for a, b in ((s.left, s.right), (s.right, s.left)):
                if isinstance(b, Product) and not isinstance(a, Product):
                    return self._product(self.rel_of(a), b)
            return self._role_inclusion(s.left, s.right) + self._role_inclusion(s.right, s.left)
        if isinstance(s, RoleInclusion):
            return self._role_inclusion(s.sub, s.sup)
        if isinstance(s, RoleChain):
            return [self._chain([self.rel_of(r) for r in s.chain], self.rel_of(s.sup))]
        if isinstance(s, DisjointRoles):
            z1, z2 = _fresh(2)
            r1, r2 = self.rel_of(s.left), self.rel_of(s.right)
            return [_forall((z1, z2), pair_member(z1, z2, r1, False),
                            pair_member(z1, z2, r2, False))]
        if isinstance(s, RoleProperty):
            return [self._property(s.prop, self.rel_of(s.role))]
        if isinstance(s, Rule):
            return self.rule(s)
        raise TranslationError(f"unsupported statement {s!r}")

    def _inclusion(self, sub, sup):
        if isinstance(sup, AllValues):
            c, r, d = self.set_of(sub), self.rel_of(sup.role), self.set_of(sup.filler)
            z1, z2 = _fresh(2)
            return [_forall((z1, z2), member(z1, c, False), pair_member(z1, z2, r, False),
                            member(z2, d))]
        if isinstance(sub, SomeValues):
            r, c, d = self.rel_of(sub.role), self.set_of(sub.filler), self.set_of(sup)
            z1, z2 = _fresh(2)
            return [_forall((z1, z2), pair_member(z1, z2, r, False), member(z2, c, False),
                            member(z1, d))]
        if isinstance(sub, MinCard):
            r, c, d = self.rel_of(sub.role), self.set_of(sub.filler), self.set_of(sup)
            z, *zs = _fresh(sub.n + 1)
            lits = ([pair_member(z, zi, r, False) for zi in zs]
                    + [member(zi, c, False) for zi in zs]
                    + [eq(a, b) for a, b in itertools.combinations(zs, 2)]
                    + [member(z, d)])
            return [_forall((z, *zs), *lits)]
        if isinstance(sup, MaxCard):
            c, r, d = self.set_of(sub), self.rel_of(sup.role), self.set_of(sup.filler)
            z, *zs = _fresh(sup.n + 2)
            lits = ([member(z, c, False)]
                    + [pair_member(z, zi, r, False) for zi in zs]
                    + [member(zi, d, False) for zi in zs]
                    + [eq(a, b) for a, b in itertools.combinations(zs, 2)])
            return [_forall((z, *zs), *lits)]
        if isinstance(sup, (SomeValues, MinCard)) or isinstance(sub, (AllValues, MaxCard)):
            raise TranslationError(f"{dl.OUTSIDE}: {sub} ⊑ {sup}")
        z, = _fresh()
        return [_forall((z,), member(z, self.set_of(sub), False),
                        member(z, self.set_of(sup)))]

    def _role_inclusion(self, sub, sup):
        z1, z2 = _fresh(2)
        return [_forall((z1, z2), pair_member(z1, z2, self.rel_of(sub), False),
                        pair_member(z1, z2, self.rel_of(sup)))]

    def _chain(self, rs, sup):
        zs = _fresh(len(rs) + 1)
        lits = [pair_member(zs[i], zs[i + 1], r, False) for i, r in enumerate(rs)]
        return _forall(zs, *lits, pair_member(zs[0], zs[-1], sup))

    def _property(self, prop, r):
        z1, z2 = _fresh(2)
        if prop == "Sym":
            return _forall((z1, z2), pair_member(z1, z2, r, False), pair_member(z2, z1, r))
        if prop == "Asym":
            return _forall((z1, z2), pair_member(z1, z2, r, False),
                           pair_member(z2, z1, r, False))
        if prop == "Ref":
            return _forall((z1,), pair_member(z1, z1, r))
        if prop == "Irref":
            return _forall((z1,), pair_member(z1, z1, r, False))
        if prop == "Tra":
            return self._chain([r, r], r)
        if prop == "Fun":
            z, = _fresh()
            return _forall((z, z1, z2), pair_member(z, z1, r, False),
                           pair_member(z, z2, r, False), eq(z1, z2))
        raise TranslationError(f"unknown role property {prop}")

    def rule(self, rule: Rule) -> list:
        """``body ⇒ head`` as one clause per head atom."""
        scope = {v: Var(0, f"_r{next(_zs)}", QUANTIFIED) for v in rule.variables()}
        body = [_neg(self.atom(l, scope)) for l in rule.body]
        heads = [self.atom(l, scope) for l in rule.head] or [None]
        out = []
        for h in heads:
            lits = body + ([h] if h is not None else [])
            if not lits:
                continue
            used = [scope[v] for v in scope if any(scope[v] in l.vars for l in lits)]
            out.append(_forall(tuple(used), *lits))
        return out

    # -- query literals ------------------------------------------------------

    def atom(self, lit: HOLiteral, scope=None) -> Literal:
        """θ of one higher-order literal; query variables become markers
        (or the quantified variables in ``scope`` when translating a rule)."""
        scope = scope or {}
        a = lit.atom

        def arg(x):
            if isinstance(x, QVar) and x in scope:
                return scope[x]
            return self.individual(x)

        if isinstance(a, ConceptAtom):
            return member(arg(a.arg), self.set_of(a.concept), lit.positive)
        if isinstance(a, RoleAtom):
            return pair_member(arg(a.left), arg(a.right), self.rel_of(a.role), lit.positive)
        if isinstance(a, EqualityAtom):
            return eq(arg(a.left), arg(a.right), lit.positive)
        raise TranslationError(f"unknown atom {a!r}")

    def query(self, q: HOQuery, strict: bool = True) -> list[Literal]:
        """θ of a query, conjunct order preserved.

        With ``strict`` every name must already be known to the table.
        Compound terms are allowed; their definitions are queued and show up
        in the next :meth:`phi`.
        """
        if strict:
            self._check_known(q)
        return [self.atom(l) for l in q.literals]

    def _check_known(self, q):
        for node in dl._walk(q.literals):
            if isinstance(node, (Concept, DataRange)):
                if self.st.lookup(1, node.name) is None:
                    raise UnknownName(f"unknown name {node.name}")
            elif isinstance(node, (RoleName, ConcreteRole)):
                if self.st.lookup(3, node.name) is None:
                    raise UnknownName(f"unknown name {node.name}")
            elif isinstance(node, (ConceptAtom, RoleAtom, EqualityAtom)):
                terms = dl._atom_terms(node)
                for t in terms:
                    if isinstance(t, str) and self.st.lookup(0, t) is None:
                        raise UnknownName(f"unknown individual {t}")
                    if isinstance(t, Constant) and self.st.lookup(0, t.name) is None:
                        raise UnknownName(f"unknown constant {t}")


def _strip_neg(term, positive):
    while isinstance(term, Neg):
        term, positive = term.arg, not positive
    return term, positive


def theta_kb(kb: KnowledgeBase) -> tuple[Conjunction, SymbolTable]:
    tr = Translator(kb)
    return tr.phi(), tr.st


def theta_axiom(ax, tr: Translator | None = None) -> Conjunction:
    """Clauses for one axiom plus the definitions it introduced."""
    tr = tr or Translator()
    before = len(tr.definitions)
    images = tr.axiom(ax)
    return normalize_cnf(And(*images, *tr.definitions[before:]))


def theta_assertion(s, tr: Translator | None = None) -> Literal:
    return (tr or Translator()).assertion(s)


def theta_query(q: HOQuery, tr: Translator) -> list[Literal]:
    return tr.query(q)
