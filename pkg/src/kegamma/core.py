"""Set-theoretic syntax: sorted variables, level-0 literals, universal clauses.

Only sorts 0 (individuals), 1 (sets of individuals) and 3 (relations, i.e.
sets of pairs) exist here.  A formula handed to the tableau is a
:class:`Conjunction` whose parts are either :class:`Literal` objects or
:class:`Clause` objects, the latter being ``(forall z1..zm)(b1 | ... | bn)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

SORTS = (0, 1, 3)

FREE = "free"
QUANTIFIED = "quantified"
QUERY = "query"
BINDINGS = (FREE, QUANTIFIED, QUERY)


class FormulaError(ValueError):
    """A formula falls outside the admitted fragment."""


class CaptureError(FormulaError):
    """A substitution would capture a quantified variable."""


@dataclass(frozen=True, slots=True)
class Var:
    sort: int
    name: str
    binding: str = FREE
    ordinal: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.sort not in SORTS:
            raise FormulaError(f"variables of sort {self.sort} are not admitted")
        if not self.name:
            raise FormulaError("variable name must be non-empty")
        if self.binding not in BINDINGS:
            raise FormulaError(f"unknown binding {self.binding!r}")

    @property
    def is_free(self) -> bool:
        return self.binding == FREE

    @property
    def is_quantified(self) -> bool:
        return self.binding == QUANTIFIED

    @property
    def is_query(self) -> bool:
        return self.binding == QUERY

    def __str__(self):
        if self.sort == 0:
            if self.binding == FREE:
                return f"x_{self.name}"
            return self.name
        sup = {1: "¹", 3: "³"}[self.sort]
        return f"X{sup}_{self.name}"


def ind(name: str, ordinal: int = 0) -> Var:
    return Var(0, name, FREE, ordinal)


def setvar(name: str, ordinal: int = 0) -> Var:
    return Var(1, name, FREE, ordinal)


def relvar(name: str, ordinal: int = 0) -> Var:
    return Var(3, name, FREE, ordinal)


def qvar(name: str, ordinal: int = 0) -> Var:
    return Var(0, name, QUANTIFIED, ordinal)


@dataclass(frozen=True, slots=True)
class Eq:
    left: Var
    right: Var

    def __post_init__(self):
        _check_sort(self.left, 0)
        _check_sort(self.right, 0)

    @property
    def args(self) -> tuple[Var, ...]:
        return (self.left, self.right)

    def rebuild(self, args):
        return Eq(*args)

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True, slots=True)
class In1:
    elem: Var
    set: Var

    def __post_init__(self):
        _check_sort(self.elem, 0)
        _check_sort(self.set, 1)

    @property
    def args(self) -> tuple[Var, ...]:
        return (self.elem, self.set)

    def rebuild(self, args):
        return In1(*args)

    def __str__(self):
        return f"{self.elem} ∈ {self.set}"


@dataclass(frozen=True, slots=True)
class In3:
    left: Var
    right: Var
    rel: Var

    def __post_init__(self):
        _check_sort(self.left, 0)
        _check_sort(self.right, 0)
        _check_sort(self.rel, 3)

    @property
    def args(self) -> tuple[Var, ...]:
        return (self.left, self.right, self.rel)

    def rebuild(self, args):
        return In3(*args)

    def __str__(self):
        return f"⟨{self.left}, {self.right}⟩ ∈ {self.rel}"


Atom = Union[Eq, In1, In3]


def _check_sort(v, sort):
    if not isinstance(v, Var) or v.sort != sort:
        raise FormulaError(f"expected a sort-{sort} variable, got {v!r}")


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __post_init__(self):
        if not isinstance(self.atom, (Eq, In1, In3)):
            raise FormulaError(f"not an atom: {self.atom!r}")

    @property
    def vars(self) -> tuple[Var, ...]:
        return self.atom.args

    def __invert__(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return str(self.atom) if self.positive else f"¬({self.atom})"


def complement(lit: Literal) -> Literal:
    return Literal(lit.atom, not lit.positive)


def eq(x: Var, y: Var, positive: bool = True) -> Literal:
    return Literal(Eq(x, y), positive)


def member(x: Var, s: Var, positive: bool = True) -> Literal:
    return Literal(In1(x, s), positive)


def pair_member(x: Var, y: Var, r: Var, positive: bool = True) -> Literal:
    return Literal(In3(x, y, r), positive)


@dataclass(frozen=True, slots=True)
class Clause:
    """``(forall qvars)(disjuncts[0] | disjuncts[1] | ...)``.

    Disjunct order is significant: the tableau splits on the lowest
    undecided index.  A clause with no quantified variables must have at
    least two disjuncts; a single ground disjunct is a :class:`Literal`.
    """

    qvars: tuple[Var, ...]
    disjuncts: tuple[Literal, ...]

    def __post_init__(self):
        if not self.disjuncts:
            raise FormulaError("a clause needs at least one disjunct")
        if len(set(self.qvars)) != len(self.qvars):
            raise FormulaError("quantified variables must be distinct")
        if not self.qvars and len(self.disjuncts) == 1:
            raise FormulaError("a ground single-disjunct clause is a literal")
        names = set()
        for v in self.qvars:
            if v.sort != 0 or not v.is_quantified:
                raise FormulaError(f"{v!r} cannot be universally quantified")
            names.add(v.name)
        used = {v for lit in self.disjuncts for v in lit.vars}
        for v in self.qvars:
            if v not in used:
                raise FormulaError(f"quantified variable {v.name} does not occur")
        for v in used:
            if v.is_quantified and v not in self.qvars:
                raise FormulaError(f"variable {v.name} is bound outside this clause")
            if not v.is_quantified and v.sort == 0 and v.name in names:
                raise CaptureError(f"free variable {v.name} clashes with a bound name")

    def instantiate(self, tau: Mapping[Var, Var]) -> tuple[Literal, ...]:
        """Instance of the matrix under ``tau`` (quantified -> free)."""
        return tuple(_subst_lit(lit, tau) for lit in self.disjuncts)

    def __str__(self):
        prefix = "".join(f"(∀{v})" for v in self.qvars)
        return f"{prefix}({' ∨ '.join(map(str, self.disjuncts))})"


Part = Union[Literal, Clause]


def part_vars(part: Part) -> Iterator[Var]:
    if isinstance(part, Literal):
        yield from part.vars
    else:
        for lit in part.disjuncts:
            yield from lit.vars


@dataclass(frozen=True)
class Conjunction:
    parts: tuple[Part, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        for p in self.parts:
            if not isinstance(p, (Literal, Clause)):
                raise FormulaError(f"not a literal or clause: {p!r}")

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def literals(self) -> list[Literal]:
        return [p for p in self.parts if isinstance(p, Literal)]

    @property
    def clauses(self) -> list[Clause]:
        return [p for p in self.parts if isinstance(p, Clause)]

    def free_vars(self, sort: int) -> list[Var]:
        """Free variables of one sort, ordered by ordinal then first occurrence."""
        seen: dict[Var, int] = {}
        for p in self.parts:
            for v in part_vars(p):
                if v.sort == sort and v.is_free and v not in seen:
                    seen[v] = len(seen)
        return sorted(seen, key=lambda v: (v.ordinal, seen[v]))

    def __str__(self):
        return " ∧ ".join(map(str, self.parts)) if self.parts else "⊤"


def _subst_lit(lit: Literal, mapping: Mapping[Var, Var]) -> Literal:
    args = lit.atom.args
    new = tuple(mapping.get(v, v) for v in args)
    if new == args:
        return lit
    return Literal(lit.atom.rebuild(new), lit.positive)


def apply_subst(part, mapping: Mapping[Var, Var]):
    """Replace free occurrences of the variables in ``mapping``.

    Works on literals, clauses, conjunctions and sequences of literals.
    Quantified occurrences are never touched.
    """
    if not mapping:
        return part
    for k, v in mapping.items():
        if k.sort != v.sort:
            raise FormulaError(f"substitution {k} -> {v} changes sort")
    if isinstance(part, Literal):
        return _subst_lit(part, _free_only(mapping))
    if isinstance(part, Clause):
        bound = {v.name for v in part.qvars}
        for target in mapping.values():
            if target.sort == 0 and target.name in bound and not target.is_quantified:
                raise CaptureError(f"{target.name} would be captured")
            if target.is_quantified:
                raise CaptureError(f"{target.name} is a quantified variable")
        free = _free_only(mapping)
        return Clause(part.qvars, tuple(_subst_lit(l, free) for l in part.disjuncts))
    if isinstance(part, Conjunction):
        return Conjunction(tuple(apply_subst(p, mapping) for p in part.parts))
    return type(part)(apply_subst(p, mapping) for p in part)


def _free_only(mapping):
    return {k: v for k, v in mapping.items() if not k.is_quantified}


def apply_subst0(part, tau: Mapping[Var, Var]):
    for k, v in tau.items():
        if k.sort != 0 or v.sort != 0:
            raise FormulaError("Subst0 maps sort-0 variables only")
    return apply_subst(part, tau)


def compose(first: Mapping[Var, Var], second: Mapping[Var, Var]) -> dict[Var, Var]:
    """The substitution equal to applying ``first`` and then ``second``."""
    out = {}
    for k, v in first.items():
        out[k] = second.get(v, v)
    for k, v in second.items():
        if k not in first:
            out[k] = v
    return {k: v for k, v in out.items() if k != v}


# -- raw formulae and clausal normal form ---------------------------------


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Or:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: object

    def __init__(self, vars, body):
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "body", body)


def _nnf(f, positive, scope):
    # Bound variables are renamed apart here, so prenexing below is safe.
    if isinstance(f, Literal):
        lit = _subst_lit(f, scope) if scope else f
        return lit if positive else complement(lit)
    if isinstance(f, Not):
        return _nnf(f.arg, not positive, scope)
    if isinstance(f, (And, Or)):
        args = tuple(_nnf(a, positive, scope) for a in f.args)
        conj = isinstance(f, And) == positive
        return ("and" if conj else "or", args)
    if isinstance(f, Forall):
        if not positive:
            raise FormulaError("negated universal quantifier (existential) is not admitted")
        inner = dict(scope)
        fresh = []
        for v in f.vars:
            if not isinstance(v, Var) or v.sort != 0:
                raise FormulaError(f"only sort-0 variables can be quantified, got {v!r}")
            nv = Var(0, f"#{next(_counter)}", QUANTIFIED)
            inner[v] = nv
            fresh.append(nv)
        return ("forall", tuple(fresh), _nnf(f.body, True, inner))
    raise FormulaError(f"construct outside the admitted fragment: {f!r}")


_counter = itertools.count()


def _clausify(f):
    if isinstance(f, Literal):
        return [((), (f,))]
    tag = f[0]
    if tag == "and":
        return [c for a in f[1] for c in _clausify(a)]
    if tag == "or":
        out = [((), ())]
        for a in f[1]:
            out = [(q1 + q2, d1 + d2) for q1, d1 in out for q2, d2 in _clausify(a)]
        return out
    _, vs, body = f
    return [(vs + q, d) for q, d in _clausify(body)]


def normalize_cnf(raw, start: int = 1) -> Conjunction:
    """Clausal normal form with quantifiers pushed inward and renamed apart.

    Quantified variables receive the names ``z1, z2, ...`` in traversal
    order, skipping names already used by free sort-0 variables.
    """
    if isinstance(raw, Conjunction):
        raw = And(*[_part_to_raw(p) for p in raw.parts])
    elif isinstance(raw, (list, tuple)):
        raw = And(*raw)
    elif isinstance(raw, Clause):
        raw = _part_to_raw(raw)
    tree = _nnf(raw, True, {})
    clauses = _clausify(tree)
    taken = {v.name for _, d in clauses for l in d for v in l.vars
             if v.sort == 0 and not v.is_quantified}
    counter = itertools.count(start)

    def fresh():
        while True:
            name = f"z{next(counter)}"
            if name not in taken:
                return name

    parts: list[Part] = []
    for qs, disj in clauses:
        lits = list(dict.fromkeys(disj))
        bound = set(qs)
        order = list(dict.fromkeys(v for l in lits for v in l.vars if v in bound))
        rename = {v: Var(0, fresh(), QUANTIFIED, i) for i, v in enumerate(order)}
        lits = [_subst_lit(l, rename) for l in lits]
        if not order and len(lits) == 1:
            parts.append(lits[0])
        else:
            parts.append(Clause(tuple(rename[v] for v in order), tuple(lits)))
    return Conjunction(tuple(parts))


def _part_to_raw(p):
    if isinstance(p, Literal):
        return p
    body = Or(*p.disjuncts)
    return Forall(p.qvars, body) if p.qvars else body


def rename_apart(parts: Iterable[Part], start: int = 1) -> Conjunction:
    """Rename quantified variables of already-clausal parts to z1, z2, ..."""
    return normalize_cnf(And(*[_part_to_raw(p) for p in parts]), start)
