"""Brute-force semantic reference for clausal conjunctions and DL statements.

Consistency is decided by enumerating the ways the named individuals can be
identified (set partitions of the pool) and, for each, grounding every
clause over the resulting domain into a propositional problem handed to a
SAT solver.  Nothing here shares code with the tableau.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from pysat.solvers import Minisat22

from .core import Clause, Conjunction, Eq, In1, In3, Literal, Var, part_vars
from . import dl

DEFAULT_BOUND = 6


class OracleError(ValueError):
    pass


@dataclass
class Interpretation:
    domain: tuple
    m0: dict = field(default_factory=dict)
    m1: dict = field(default_factory=dict)
    m3: dict = field(default_factory=dict)

    def value(self, v: Var):
        table = {0: self.m0, 1: self.m1, 3: self.m3}[v.sort]
        if v not in table:
            if v.sort == 0:
                raise OracleError(f"unassigned variable {v}")
            return frozenset()
        return table[v]


def _holds(lit: Literal, I: Interpretation, env) -> bool:
    val = lambda v: env[v] if v in env else I.value(v)
    a = lit.atom
    if isinstance(a, Eq):
        r = val(a.left) == val(a.right)
    elif isinstance(a, In1):
        r = val(a.elem) in val(a.set)
    else:
        r = (val(a.left), val(a.right)) in val(a.rel)
    return r == lit.positive


def evaluate(phi, I: Interpretation) -> bool:
    """Truth of a literal, clause or conjunction under ``I``."""
    if isinstance(phi, Literal):
        return _holds(phi, I, {})
    if isinstance(phi, Clause):
        for us in itertools.product(I.domain, repeat=len(phi.qvars)):
            env = dict(zip(phi.qvars, us))
            if not any(_holds(l, I, env) for l in phi.disjuncts):
                return False
        return True
    return all(evaluate(p, I) for p in phi)


def partitions(n: int):
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield ()
        return

    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()

    yield from rec([0], 0)


def _vars(phi, sort, extra=()):
    out = {}
    for p in list(phi) + list(extra):
        for v in part_vars(p):
            if v.sort == sort and v.is_free:
                out.setdefault(v, None)
    return list(out)


class _Grounding:
    """φ over one identification of the individuals, as CNF."""

    def __init__(self, phi, pool, blocks, sets, rels):
        self.m0 = {v: blocks[i] for i, v in enumerate(pool)}
        self.domain = tuple(sorted(set(blocks))) or (0,)
        self.sets, self.rels = sets, rels
        self.ids: dict = {}
        self.cnf: list = []
        self.trivially_false = False
        for p in phi:
            self._add(p)

    def atom_id(self, key):
        if key not in self.ids:
            self.ids[key] = len(self.ids) + 1
        return self.ids[key]

    def ground(self, lit: Literal, env):
        """True, False, or a signed SAT literal."""
        val = lambda v: env[v] if v in env else self.m0[v]
        a = lit.atom
        if isinstance(a, Eq):
            return (val(a.left) == val(a.right)) == lit.positive
        if isinstance(a, In1):
            key = ("1", val(a.elem), a.set)
        else:
            key = ("3", val(a.left), val(a.right), a.rel)
        i = self.atom_id(key)
        return i if lit.positive else -i

    def _add(self, p):
        if isinstance(p, Literal):
            g = self.ground(p, {})
            if g is False:
                self.trivially_false = True
            elif g is not True:
                self.cnf.append([g])
            return
        for us in itertools.product(self.domain, repeat=len(p.qvars)):
            env = dict(zip(p.qvars, us))
            cl = []
            for l in p.disjuncts:
                g = self.ground(l, env)
                if g is True:
                    break
                if g is not False:
                    cl.append(g)
            else:
                if not cl:
                    self.trivially_false = True
                    return
                self.cnf.append(cl)

    def solve(self, extra=()):
        if self.trivially_false:
            return None
        assumptions = []
        for l in extra:
            g = self.ground(l, {})
            if g is False:
                return None
            if g is not True:
                assumptions.append(g)
        with Minisat22(bootstrap_with=self.cnf) as s:
            if not s.solve(assumptions=assumptions):
                return None
            model = set(x for x in s.get_model() if x > 0)
        m1 = {X: set() for X in self.sets}
        m3 = {R: set() for R in self.rels}
        for key, i in self.ids.items():
            if i in model:
                if key[0] == "1":
                    m1.setdefault(key[2], set()).add(key[1])
                else:
                    m3.setdefault(key[3], set()).add((key[1], key[2]))
        return Interpretation(self.domain, dict(self.m0),
                              {k: frozenset(v) for k, v in m1.items()},
                              {k: frozenset(v) for k, v in m3.items()})


def _groundings(phi: Conjunction, bound, extra=()):
    pool = _vars(phi, 0, extra)
    if len(pool) > bound:
        raise OracleError(f"{len(pool)} individuals exceed the oracle bound {bound}")
    sets, rels = _vars(phi, 1, extra), _vars(phi, 3, extra)
    for blocks in partitions(len(pool)):
        yield pool, _Grounding(phi, pool, blocks, sets, rels)


def find_model(phi: Conjunction, extra=(), bound: int = DEFAULT_BOUND):
    """Some interpretation over a quotient of the individuals satisfying
    ``phi`` and the ground literals ``extra``, or ``None``."""
    for _, g in _groundings(phi, bound, extra):
        m = g.solve(extra)
        if m is not None:
            return m
    return None


def oracle_consistent(phi: Conjunction, bound: int = DEFAULT_BOUND) -> bool:
    return find_model(phi, (), bound) is not None


def _candidates(marker: Var, phi, allows):
    sort_pool = [v for v in _vars(phi, marker.sort) if not v.is_query]
    return [v for v in sort_pool if allows(marker, v)]


def _markers(psi):
    return list(dict.fromkeys(v for l in psi for v in l.vars if v.is_query))


def _bindings(psi, phi, allows):
    ms = _markers(psi)
    choices = [_candidates(m, phi, allows) for m in ms]
    for combo in itertools.product(*choices):
        yield dict(zip(ms, combo))


def _subst(lit: Literal, b):
    return Literal(lit.atom.rebuild(tuple(b.get(v, v) for v in lit.atom.args)), lit.positive)


def oracle_answers(psi, phi: Conjunction, allows=lambda m, v: True,
                   bound: int = DEFAULT_BOUND) -> set:
    """Bindings σ such that some model satisfies φ ∧ ψσ."""
    grounds = list(_groundings(phi, bound))
    out = set()
    for b in _bindings(psi, phi, allows):
        inst = [_subst(l, b) for l in psi]
        if any(g.solve(inst) is not None for _, g in grounds):
            out.add(frozenset(b.items()))
    return out


def branch_model(branch, phi: Conjunction, pool) -> Interpretation:
    """Atoms on the rewritten branch are true, every other atom false; the
    domain is the set of class representatives."""
    sigma = branch.sigma
    lits = branch.normalized or branch.literals
    reps = [v for v in pool if sigma.get(v, v) == v]
    m0 = {v: sigma.get(v, v).name for v in pool}
    m1 = {X: set() for X in _vars(phi, 1, lits)}
    m3 = {R: set() for R in _vars(phi, 3, lits)}
    for l in lits:
        if not l.positive:
            continue
        a = l.atom
        if isinstance(a, In1):
            m1[a.set].add(a.elem.name)
        elif isinstance(a, In3):
            m3[a.rel].add((a.left.name, a.right.name))
    return Interpretation(tuple(r.name for r in reps), m0,
                          {k: frozenset(v) for k, v in m1.items()},
                          {k: frozenset(v) for k, v in m3.items()})


def answers_in_model(psi, I: Interpretation, phi: Conjunction, sigma=None,
                     allows=lambda m, v: True) -> set:
    """Bindings (to representatives) under which every literal of ψ holds in ``I``."""
    sigma = sigma or {}
    out = set()
    for b in _bindings(psi, phi, allows):
        if any(sigma.get(v, v) != v for m, v in b.items() if v.sort == 0):
            continue
        if all(_holds(_subst(l, b), I, {}) for l in psi):
            out.add(frozenset(b.items()))
    return out


# -- DL semantics -----------------------------------------------------------


@dataclass
class DLInterpretation:
    domain: tuple
    individuals: dict = field(default_factory=dict)   # name or Constant -> element
    concepts: dict = field(default_factory=dict)      # name -> set
    roles: dict = field(default_factory=dict)         # name -> set of pairs


def ext(term, I: DLInterpretation):
    """Extension of a concept, role or data type term."""
    D = I.domain
    if isinstance(term, (dl.Concept, dl.DataRange)):
        return frozenset(I.concepts.get(term.name, ()))
    if isinstance(term, (dl.RoleName, dl.ConcreteRole)):
        return frozenset(I.roles.get(term.name, ()))
    if isinstance(term, dl.Top):
        return frozenset(D)
    if isinstance(term, dl.Bottom):
        return frozenset()
    if isinstance(term, dl.UniversalRole):
        return frozenset(itertools.product(D, D))
    k = dl.kind(term)
    full = frozenset(D) if k in (dl.CONCEPT, dl.DATATYPE) else frozenset(itertools.product(D, D))
    if isinstance(term, dl.Neg):
        return full - ext(term.arg, I)
    if isinstance(term, dl.Conj):
        return frozenset.intersection(*[ext(a, I) for a in term.args])
    if isinstance(term, dl.Disj):
        return frozenset.union(*[ext(a, I) for a in term.args])
    if isinstance(term, dl.Nominal):
        return frozenset(I.individuals[a] for a in term.individuals)
    if isinstance(term, dl.DataOneOf):
        return frozenset(I.individuals[c] for c in term.constants)
    if isinstance(term, dl.SelfRestriction):
        r = ext(term.role, I)
        return frozenset(x for x in D if (x, x) in r)
    if isinstance(term, dl.HasValue):
        r, v = ext(term.role, I), I.individuals[term.value]
        return frozenset(x for x in D if (x, v) in r)
    if isinstance(term, dl.Inverse):
        return frozenset((y, x) for x, y in ext(term.role, I))
    if isinstance(term, dl.DomainRestriction):
        c = ext(term.concept, I)
        return frozenset(p for p in ext(term.role, I) if p[0] in c)
    if isinstance(term, dl.RangeRestriction):
        c = ext(term.filler, I)
        return frozenset(p for p in ext(term.role, I) if p[1] in c)
    if isinstance(term, dl.Restriction):
        c1, c2 = ext(term.concept, I), ext(term.filler, I)
        return frozenset(p for p in ext(term.role, I) if p[0] in c1 and p[1] in c2)
    if isinstance(term, dl.IdentityRole):
        return frozenset((x, x) for x in ext(term.concept, I))
    if isinstance(term, dl.Product):
        return frozenset(itertools.product(ext(term.left, I), ext(term.right, I)))
    raise OracleError(f"no extension for {term!r}")


def _succ(I, role, x, filler):
    r, c = ext(role, I), ext(filler, I)
    return {y for y in I.domain if (x, y) in r and y in c}


def dl_satisfies(s, I: DLInterpretation) -> bool:
    """Satisfaction of one statement, row by row of the DL semantics table."""
    D = I.domain
    if isinstance(s, dl.ConceptInclusion):
        sub, sup = s.sub, s.sup
        if isinstance(sup, dl.AllValues):
            r, d = ext(sup.role, I), ext(sup.filler, I)
            return all(y in d for x in ext(sub, I) for (a, y) in r if a == x)
        if isinstance(sub, dl.SomeValues):
            lhs = {x for x in D if _succ(I, sub.role, x, sub.filler)}
            return lhs <= ext(sup, I)
        if isinstance(sub, dl.MinCard):
            lhs = {x for x in D if len(_succ(I, sub.role, x, sub.filler)) >= sub.n}
            return lhs <= ext(sup, I)
        if isinstance(sup, dl.MaxCard):
            rhs = {x for x in D if len(_succ(I, sup.role, x, sup.filler)) <= sup.n}
            return ext(sub, I) <= rhs
        return ext(sub, I) <= ext(sup, I)
    if isinstance(s, dl.ConceptEquivalence):
        return ext(s.left, I) == ext(s.right, I)
    if isinstance(s, dl.RoleInclusion):
        return ext(s.sub, I) <= ext(s.sup, I)
    if isinstance(s, dl.RoleEquivalence):
        return ext(s.left, I) == ext(s.right, I)
    if isinstance(s, dl.RoleChain):
        comp = {(x, x) for x in D}
        for r in s.chain:
            rr = ext(r, I)
            comp = {(x, z) for (x, y) in comp for (y2, z) in rr if y == y2}
        return comp <= ext(s.sup, I)
    if isinstance(s, dl.DisjointRoles):
        return not (ext(s.left, I) & ext(s.right, I))
    if isinstance(s, dl.RoleProperty):
        r = ext(s.role, I)
        if s.prop == "Sym":
            return all((y, x) in r for x, y in r)
        if s.prop == "Asym":
            return all((y, x) not in r for x, y in r)
        if s.prop == "Ref":
            return all((x, x) in r for x in D)
        if s.prop == "Irref":
            return all((x, x) not in r for x in D)
        if s.prop == "Tra":
            return all((x, z) in r for x, y in r for y2, z in r if y == y2)
        if s.prop == "Fun":
            return all(y == z for x, y in r for x2, z in r if x == x2)
    if isinstance(s, dl.ConceptAssertion):
        return (I.individuals[s.individual] in ext(s.concept, I)) == s.positive
    if isinstance(s, dl.RoleAssertion):
        p = (I.individuals[s.subject], I.individuals[s.object])
        return (p in ext(s.role, I)) == s.positive
    if isinstance(s, dl.SameIndividual):
        return I.individuals[s.left] == I.individuals[s.right]
    if isinstance(s, dl.DifferentIndividuals):
        return I.individuals[s.left] != I.individuals[s.right]
    raise OracleError(f"no semantics for {s!r}")
