"""Description-logic knowledge bases and higher-order conjunctive queries.

Terms are small frozen dataclasses.  The same boolean constructors
(:class:`Neg`, :class:`Conj`, :class:`Disj`) serve concepts, abstract roles,
concrete roles and data type terms; :func:`kind` tells them apart from
their arguments.  Restrictions that may only occur on one side of an
inclusion (:class:`SomeValues`, :class:`AllValues`, :class:`MinCard`,
:class:`MaxCard`) are separate classes and are not terms by themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union
from urllib.parse import quote

CONCEPT = "concept"
ROLE = "role"
CROLE = "crole"
DATATYPE = "datatype"

DEFAULT_MAX_CARD = 5


class KindError(ValueError):
    pass


# -- names ----------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """A data type constant ``e_d``."""

    value: str
    datatype: str = "string"

    @property
    def name(self) -> str:
        return f"{quote(self.value, safe='')}^^{self.datatype}"

    def __str__(self):
        return f'"{self.value}"^^{self.datatype}'


POOLS = ("i", "e", "d", "c", "ar", "cr")


@dataclass(frozen=True)
class QVar:
    """A query variable from one of the six pools.

    ``i`` individuals, ``e`` data constants, ``d`` data type terms,
    ``c`` concepts, ``ar`` abstract roles, ``cr`` concrete roles.
    """

    name: str
    pool: str = "i"

    def __post_init__(self):
        if self.pool not in POOLS:
            raise KindError(f"unknown variable pool {self.pool!r}")

    def __str__(self):
        return f"?{self.name}"


Individual = str
IndArg = Union[str, QVar]
DataArg = Union[Constant, QVar]


# -- terms ----------------------------------------------------------------


@dataclass(frozen=True)
class Concept:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "⊤"


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "⊥"


@dataclass(frozen=True)
class RoleName:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class UniversalRole:
    def __str__(self):
        return "U"


@dataclass(frozen=True)
class ConcreteRole:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class DataRange:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: object

    def __str__(self):
        return f"¬{self.arg}"


@dataclass(frozen=True)
class Conj:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(args))

    def __str__(self):
        return "(" + " ⊓ ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Disj:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(args))

    def __str__(self):
        return "(" + " ⊔ ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Nominal:
    """``{a1, ..., an}``."""

    individuals: tuple

    def __init__(self, *individuals):
        object.__setattr__(self, "individuals", tuple(individuals))

    def __str__(self):
        return "{" + ", ".join(self.individuals) + "}"


@dataclass(frozen=True)
class DataOneOf:
    constants: tuple

    def __init__(self, *constants):
        object.__setattr__(self, "constants", tuple(constants))

    def __str__(self):
        return "{" + ", ".join(map(str, self.constants)) + "}"


@dataclass(frozen=True)
class SelfRestriction:
    """``∃R.Self``."""

    role: object

    def __str__(self):
        return f"∃{self.role}.Self"


@dataclass(frozen=True)
class HasValue:
    """``∃R.{a}`` or, with a concrete role, ``∃P.{e_d}``."""

    role: object
    value: Union[str, Constant]

    def __str__(self):
        return f"∃{self.role}.{{{self.value}}}"


@dataclass(frozen=True)
class Inverse:
    role: object

    def __str__(self):
        return f"{self.role}⁻"


@dataclass(frozen=True)
class DomainRestriction:
    """``R_{C|}``."""

    role: object
    concept: object

    def __str__(self):
        return f"{self.role}_{{{self.concept}|}}"


@dataclass(frozen=True)
class RangeRestriction:
    """``R_{|C}`` (or ``P_{|t}``)."""

    role: object
    filler: object

    def __str__(self):
        return f"{self.role}_{{|{self.filler}}}"


@dataclass(frozen=True)
class Restriction:
    """``R_{C1|C2}`` (or ``P_{C|t}``)."""

    role: object
    concept: object
    filler: object

    def __str__(self):
        return f"{self.role}_{{{self.concept}|{self.filler}}}"


@dataclass(frozen=True)
class IdentityRole:
    concept: object

    def __str__(self):
        return f"id({self.concept})"


@dataclass(frozen=True)
class Product:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} × {self.right})"


# Side-restricted class expressions.


@dataclass(frozen=True)
class SomeValues:
    role: object
    filler: object

    def __str__(self):
        return f"∃{self.role}.{self.filler}"


@dataclass(frozen=True)
class AllValues:
    role: object
    filler: object

    def __str__(self):
        return f"∀{self.role}.{self.filler}"


@dataclass(frozen=True)
class MinCard:
    n: int
    role: object
    filler: object

    def __str__(self):
        return f"≥{self.n}{self.role}.{self.filler}"


@dataclass(frozen=True)
class MaxCard:
    n: int
    role: object
    filler: object

    def __str__(self):
        return f"≤{self.n}{self.role}.{self.filler}"


RESTRICTIONS = (SomeValues, AllValues, MinCard, MaxCard)


def kind(term) -> str:
    """Syntactic category of a term; raises :class:`KindError` if ill-formed."""
    if isinstance(term, (Concept, Top, Bottom, Nominal)):
        return CONCEPT
    if isinstance(term, (RoleName, UniversalRole)):
        return ROLE
    if isinstance(term, ConcreteRole):
        return CROLE
    if isinstance(term, (DataRange, DataOneOf)):
        return DATATYPE
    if isinstance(term, Neg):
        return kind(term.arg)
    if isinstance(term, (Conj, Disj)):
        if not term.args:
            raise KindError(f"empty {type(term).__name__}")
        kinds = {kind(a) for a in term.args}
        if len(kinds) != 1:
            raise KindError(f"mixed operands in {term}")
        return kinds.pop()
    if isinstance(term, SelfRestriction):
        _expect(term.role, ROLE)
        return CONCEPT
    if isinstance(term, HasValue):
        k = kind(term.role)
        if k == ROLE and isinstance(term.value, str):
            return CONCEPT
        if k == CROLE and isinstance(term.value, Constant):
            return CONCEPT
        raise KindError(f"bad value restriction {term}")
    if isinstance(term, Inverse):
        _expect(term.role, ROLE)
        return ROLE
    if isinstance(term, DomainRestriction):
        k = kind(term.role)
        if k not in (ROLE, CROLE):
            raise KindError(f"{term} restricts a non-role")
        _expect(term.concept, CONCEPT)
        return k
    if isinstance(term, (RangeRestriction, Restriction)):
        k = kind(term.role)
        if k not in (ROLE, CROLE):
            raise KindError(f"{term} restricts a non-role")
        if isinstance(term, Restriction):
            _expect(term.concept, CONCEPT)
        _expect(term.filler, CONCEPT if k == ROLE else DATATYPE)
        return k
    if isinstance(term, IdentityRole):
        _expect(term.concept, CONCEPT)
        return ROLE
    if isinstance(term, Product):
        _expect(term.left, CONCEPT)
        _expect(term.right, CONCEPT)
        return ROLE
    if isinstance(term, RESTRICTIONS):
        raise KindError(f"construct outside DL_D^{{4,×}}: {term} is not a term here")
    raise KindError(f"unknown term {term!r}")


def _expect(term, k):
    got = kind(term)
    if got != k:
        raise KindError(f"expected a {k} term, got {got} {term}")


def canonical(term) -> str:
    """Whitespace-free, brace-free serialization used to name set variables."""
    if isinstance(term, (Concept, RoleName, ConcreteRole, DataRange)):
        return term.name
    if isinstance(term, Top):
        return "⊤"
    if isinstance(term, Bottom):
        return "⊥"
    if isinstance(term, UniversalRole):
        return "U"
    if isinstance(term, Constant):
        return term.name
    if isinstance(term, str):
        return term
    if isinstance(term, Neg):
        return f"not({canonical(term.arg)})"
    if isinstance(term, Conj):
        return f"and({','.join(canonical(a) for a in term.args)})"
    if isinstance(term, Disj):
        return f"or({','.join(canonical(a) for a in term.args)})"
    if isinstance(term, Nominal):
        return f"one({','.join(term.individuals)})"
    if isinstance(term, DataOneOf):
        return f"one({','.join(c.name for c in term.constants)})"
    if isinstance(term, SelfRestriction):
        return f"self({canonical(term.role)})"
    if isinstance(term, HasValue):
        return f"has({canonical(term.role)},{canonical(term.value)})"
    if isinstance(term, Inverse):
        return f"inv({canonical(term.role)})"
    if isinstance(term, DomainRestriction):
        return f"dom({canonical(term.role)},{canonical(term.concept)})"
    if isinstance(term, RangeRestriction):
        return f"rng({canonical(term.role)},{canonical(term.filler)})"
    if isinstance(term, Restriction):
        return (f"restr({canonical(term.role)},{canonical(term.concept)},"
                f"{canonical(term.filler)})")
    if isinstance(term, IdentityRole):
        return f"id({canonical(term.concept)})"
    if isinstance(term, Product):
        return f"prod({canonical(term.left)},{canonical(term.right)})"
    raise KindError(f"cannot serialize {term!r}")


def is_named(term) -> bool:
    return isinstance(term, (Concept, RoleName, ConcreteRole, DataRange))


# -- axioms and assertions --------------------------------------------------


@dataclass(frozen=True)
class ConceptInclusion:
    """``sub ⊑ sup``; also covers data type terms and the restriction forms
    ``C ⊑ ∀R.D``, ``∃R.C ⊑ D``, ``≥n R.C ⊑ D`` and ``C ⊑ ≤n R.D``."""

    sub: object
    sup: object

    def __str__(self):
        return f"{self.sub} ⊑ {self.sup}"


@dataclass(frozen=True)
class ConceptEquivalence:
    left: object
    right: object

    def __str__(self):
        return f"{self.left} ≡ {self.right}"


@dataclass(frozen=True)
class RoleInclusion:
    sub: object
    sup: object

    def __str__(self):
        return f"{self.sub} ⊑ {self.sup}"


@dataclass(frozen=True)
class RoleEquivalence:
    left: object
    right: object

    def __str__(self):
        return f"{self.left} ≡ {self.right}"


@dataclass(frozen=True)
class RoleChain:
    chain: tuple
    sup: object

    def __str__(self):
        return f"{' ∘ '.join(map(str, self.chain))} ⊑ {self.sup}"


@dataclass(frozen=True)
class RoleProperty:
    """``Sym``, ``Asym``, ``Ref``, ``Irref``, ``Tra`` or ``Fun`` of a role."""

    prop: str
    role: object

    def __str__(self):
        return f"{self.prop}({self.role})"


ROLE_PROPERTIES = ("Sym", "Asym", "Ref", "Irref", "Tra", "Fun")


@dataclass(frozen=True)
class DisjointRoles:
    left: object
    right: object

    def __str__(self):
        return f"Dis({self.left}, {self.right})"


@dataclass(frozen=True)
class ConceptAssertion:
    """``a : C`` (``positive=False`` asserts ``a : ¬C``); with a data type
    term and a constant this is ``e_d : t``."""

    individual: Union[str, Constant]
    concept: object
    positive: bool = True

    def __str__(self):
        s = f"{self.individual} : {self.concept}"
        return s if self.positive else f"¬({s})"


@dataclass(frozen=True)
class RoleAssertion:
    """``(a, b) : R`` or ``(a, e_d) : P``; ``positive=False`` is the
    negative property assertion."""

    role: object
    subject: str
    object: Union[str, Constant]
    positive: bool = True

    def __str__(self):
        s = f"({self.subject}, {self.object}) : {self.role}"
        return s if self.positive else f"¬({s})"


@dataclass(frozen=True)
class SameIndividual:
    left: str
    right: str

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class DifferentIndividuals:
    left: str
    right: str

    def __str__(self):
        return f"{self.left} ≠ {self.right}"


# -- higher-order literals ---------------------------------------------------


@dataclass(frozen=True)
class ConceptAtom:
    """``C(w)``, ``t(u)``, ``c(w)`` or ``t?(u)``."""

    concept: object
    arg: object

    def __str__(self):
        return f"{self.concept}({self.arg})"


@dataclass(frozen=True)
class RoleAtom:
    """``R(w1,w2)``, ``P(w,u)``, ``r(w1,w2)`` or ``p(w,u)``."""

    role: object
    left: object
    right: object

    def __str__(self):
        return f"{self.role}({self.left}, {self.right})"


@dataclass(frozen=True)
class EqualityAtom:
    left: object
    right: object

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class HOLiteral:
    atom: object
    positive: bool = True

    def __str__(self):
        return str(self.atom) if self.positive else f"¬{self.atom}"


@dataclass(frozen=True)
class HOQuery:
    literals: tuple = ()

    def __init__(self, *literals):
        if len(literals) == 1 and isinstance(literals[0], (list, tuple)):
            literals = tuple(literals[0])
        object.__setattr__(self, "literals", tuple(literals))

    def variables(self) -> list[QVar]:
        return list(dict.fromkeys(v for l in self.literals for v in _atom_terms(l.atom)
                                  if isinstance(v, QVar)))

    @property
    def is_ground(self) -> bool:
        return not self.variables()

    def __str__(self):
        return " ∧ ".join(map(str, self.literals)) if self.literals else "λ"


def _atom_terms(atom):
    if isinstance(atom, ConceptAtom):
        return (atom.concept, atom.arg)
    if isinstance(atom, RoleAtom):
        return (atom.role, atom.left, atom.right)
    return (atom.left, atom.right)


@dataclass(frozen=True)
class Rule:
    """A SWRL rule ``body1 ∧ ... ∧ bodyk ⇒ head1 ∧ ... ∧ headm``.

    Variables are :class:`QVar` objects of pool ``i`` or ``e``; body literals
    may be negated.
    """

    body: tuple
    head: tuple

    def variables(self) -> list[QVar]:
        return list(dict.fromkeys(v for l in self.body + self.head
                                  for v in _atom_terms(l.atom) if isinstance(v, QVar)))

    def __str__(self):
        return f"{' ∧ '.join(map(str, self.body)) or '⊤'} ⇒ {' ∧ '.join(map(str, self.head))}"


@dataclass(frozen=True)
class HOSubstitution:
    """Bindings of query variables to names, kept sorted for hashing."""

    pairs: tuple = ()

    @classmethod
    def of(cls, mapping) -> "HOSubstitution":
        items = sorted(mapping.items(), key=lambda kv: (kv[0].pool, kv[0].name))
        return cls(tuple(items))

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def __str__(self):
        return "{" + ", ".join(f"{k.name}/{_name(v)}" for k, v in self.pairs) + "}"


def _name(v):
    return v if isinstance(v, str) else getattr(v, "name", str(v))


# -- knowledge base ---------------------------------------------------------


RBOX_TYPES = (RoleInclusion, RoleEquivalence, RoleChain, RoleProperty, DisjointRoles)
TBOX_TYPES = (ConceptInclusion, ConceptEquivalence)
ABOX_TYPES = (ConceptAssertion, RoleAssertion, SameIndividual, DifferentIndividuals)


@dataclass(frozen=True)
class Signature:
    individuals: tuple = ()
    concepts: tuple = ()
    roles: tuple = ()
    concrete_roles: tuple = ()
    datatypes: tuple = ()
    constants: tuple = ()


@dataclass(frozen=True)
class KnowledgeBase:
    rbox: tuple = ()
    tbox: tuple = ()
    abox: tuple = ()
    rules: tuple = ()
    signature: Signature = field(default_factory=Signature)

    @classmethod
    def build(cls, statements, signature: Signature | None = None) -> "KnowledgeBase":
        """Sort statements into boxes; the signature defaults to the names used,
        in order of first appearance."""
        rbox, tbox, abox, rules = [], [], [], []
        for s in statements:
            if isinstance(s, RBOX_TYPES):
                rbox.append(s)
            elif isinstance(s, TBOX_TYPES):
                tbox.append(s)
            elif isinstance(s, ABOX_TYPES):
                abox.append(s)
            elif isinstance(s, Rule):
                rules.append(s)
            else:
                raise TypeError(f"not a statement: {s!r}")
        kb = cls(tuple(rbox), tuple(tbox), tuple(abox), tuple(rules), Signature())
        sig = signature or used_signature(kb)
        return cls(kb.rbox, kb.tbox, kb.abox, kb.rules, sig)

    @property
    def statements(self) -> tuple:
        return self.rbox + self.tbox + self.abox + self.rules


def _walk(obj) -> Iterator:
    yield obj
    if isinstance(obj, (str, Constant, QVar)) or obj is None:
        return
    if isinstance(obj, tuple):
        for x in obj:
            yield from _walk(x)
        return
    for f in getattr(obj, "__dataclass_fields__", {}):
        yield from _walk(getattr(obj, f))


def used_names(kb_or_statements) -> dict[str, list]:
    """Names used, per pool, in order of first appearance."""
    stmts = kb_or_statements.statements if isinstance(kb_or_statements, KnowledgeBase) \
        else tuple(kb_or_statements)
    pools: dict[str, dict] = {k: {} for k in
                              ("individuals", "concepts", "roles", "concrete_roles",
                               "datatypes", "constants")}
    for s in stmts:
        for o in _individual_slots(s):
            pools["individuals"][o] = None
        for node in _walk(s):
            if isinstance(node, Concept):
                pools["concepts"][node.name] = None
            elif isinstance(node, RoleName):
                pools["roles"][node.name] = None
            elif isinstance(node, ConcreteRole):
                pools["concrete_roles"][node.name] = None
            elif isinstance(node, DataRange):
                pools["datatypes"][node.name] = None
            elif isinstance(node, Constant):
                pools["constants"][node] = None
            elif isinstance(node, Nominal):
                for a in node.individuals:
                    pools["individuals"][a] = None
            elif isinstance(node, HasValue) and isinstance(node.value, str):
                pools["individuals"][node.value] = None
            elif isinstance(node, (ConceptAtom, RoleAtom, EqualityAtom)):
                for t in _atom_terms(node):
                    if isinstance(t, str):
                        pools["individuals"][t] = None
    return {k: list(v) for k, v in pools.items()}


def _individual_slots(s):
    if isinstance(s, ConceptAssertion) and isinstance(s.individual, str):
        yield s.individual
    elif isinstance(s, RoleAssertion):
        yield s.subject
        if isinstance(s.object, str):
            yield s.object
    elif isinstance(s, (SameIndividual, DifferentIndividuals)):
        yield s.left
        yield s.right


def used_signature(kb) -> Signature:
    names = used_names(kb)
    return Signature(**{k: tuple(v) for k, v in names.items()})


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    message: str
    where: str = ""

    def __str__(self):
        return f"{self.where}: {self.message}" if self.where else self.message


OUTSIDE = "construct outside DL_D^{4,×}"


def validate_kb(kb: KnowledgeBase, max_card: int = DEFAULT_MAX_CARD) -> list[Diagnostic]:
    """Empty list iff every statement conforms to the grammar."""
    out: list[Diagnostic] = []
    sig = kb.signature
    pools = {
        "individuals": set(sig.individuals), "concepts": set(sig.concepts),
        "roles": set(sig.roles), "concrete_roles": set(sig.concrete_roles),
        "datatypes": set(sig.datatypes),
    }
    keys = list(pools)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            clash = pools[a] & pools[b]
            if clash:
                out.append(Diagnostic(f"name pools {a} and {b} share {sorted(clash)}"))
    used = used_names(kb)
    for pool, names in used.items():
        declared = set(getattr(sig, pool))
        for n in names:
            if n not in declared:
                out.append(Diagnostic(f"undeclared {pool[:-1]} {n}"))
    for s in kb.statements:
        where = str(s)
        try:
            _check_statement(s, max_card)
        except KindError as e:
            out.append(Diagnostic(str(e), where))
    return out


def _check_statement(s, max_card):
    if isinstance(s, ConceptInclusion):
        sub, sup = s.sub, s.sup
        if isinstance(sup, AllValues):
            _expect(sub, CONCEPT)
            _restriction(sup, 1, max_card)
        elif isinstance(sup, MaxCard):
            _expect(sub, CONCEPT)
            _restriction(sup, sup.n, max_card)
        elif isinstance(sub, (SomeValues, MinCard)):
            _expect(sup, CONCEPT)
            _restriction(sub, getattr(sub, "n", 1), max_card)
        elif isinstance(sup, (SomeValues, MinCard)):
            raise KindError(f"{OUTSIDE}: existential quantification on the right-hand side")
        elif isinstance(sub, (AllValues, MaxCard)):
            raise KindError(f"{OUTSIDE}: universal restriction on the left-hand side")
        else:
            k = kind(sub)
            if k not in (CONCEPT, DATATYPE) or kind(sup) != k:
                raise KindError("inclusion between terms of different kinds")
    elif isinstance(s, ConceptEquivalence):
        if isinstance(s.left, RESTRICTIONS) or isinstance(s.right, RESTRICTIONS):
            raise KindError(f"{OUTSIDE}: restriction in an equivalence")
        k = kind(s.left)
        if k not in (CONCEPT, DATATYPE) or kind(s.right) != k:
            raise KindError("equivalence between terms of different kinds")
    elif isinstance(s, (RoleInclusion, RoleEquivalence, DisjointRoles)):
        a, b = (s.sub, s.sup) if isinstance(s, RoleInclusion) else (s.left, s.right)
        k = kind(a)
        if k not in (ROLE, CROLE) or kind(b) != k:
            raise KindError("role axiom between terms of different kinds")
    elif isinstance(s, RoleChain):
        if not s.chain:
            raise KindError("empty role chain")
        for r in s.chain + (s.sup,):
            _expect(r, ROLE)
    elif isinstance(s, RoleProperty):
        if s.prop not in ROLE_PROPERTIES:
            raise KindError(f"unknown role property {s.prop}")
        k = kind(s.role)
        if k == CROLE and s.prop != "Fun":
            raise KindError(f"{s.prop} is not defined for concrete roles")
        if k not in (ROLE, CROLE):
            raise KindError(f"{s.prop} applied to a non-role")
    elif isinstance(s, ConceptAssertion):
        k = kind(s.concept)
        if isinstance(s.individual, Constant):
            if k != DATATYPE:
                raise KindError("a constant can only be asserted to a data type term")
        elif k != CONCEPT:
            raise KindError("an individual can only be asserted to a concept")
    elif isinstance(s, RoleAssertion):
        k = kind(s.role)
        if k == ROLE and not isinstance(s.object, str):
            raise KindError("abstract role assertion needs two individuals")
        if k == CROLE and not isinstance(s.object, Constant):
            raise KindError("concrete role assertion needs a constant")
        if k not in (ROLE, CROLE):
            raise KindError("role assertion on a non-role")
    elif isinstance(s, (SameIndividual, DifferentIndividuals)):
        if not isinstance(s.left, str) or not isinstance(s.right, str):
            raise KindError("equality assertions relate individuals")
    elif isinstance(s, Rule):
        for lit in s.body + s.head:
            _check_ho_atom(lit.atom, rule=True)
    else:
        raise KindError(f"unknown statement {s!r}")


def _restriction(r, n, max_card):
    k = kind(r.role)
    if k == ROLE:
        _expect(r.filler, CONCEPT)
    elif k == CROLE:
        _expect(r.filler, DATATYPE)
    else:
        raise KindError(f"{r} quantifies over a non-role")
    if not isinstance(n, int) or n < 1:
        raise KindError(f"cardinality bound must be at least 1, got {n}")
    if n > max_card:
        raise KindError(f"cardinality bound {n} exceeds the configured maximum {max_card}")


def _check_ho_atom(atom, rule=False):
    if isinstance(atom, ConceptAtom):
        if isinstance(atom.concept, QVar):
            if rule or atom.concept.pool not in ("c", "d"):
                raise KindError(f"bad concept variable in {atom}")
            k = CONCEPT if atom.concept.pool == "c" else DATATYPE
        else:
            k = kind(atom.concept)
        _check_arg(atom.arg, k == DATATYPE)
    elif isinstance(atom, RoleAtom):
        if isinstance(atom.role, QVar):
            if rule or atom.role.pool not in ("ar", "cr"):
                raise KindError(f"bad role variable in {atom}")
            k = ROLE if atom.role.pool == "ar" else CROLE
        else:
            k = kind(atom.role)
            if k not in (ROLE, CROLE):
                raise KindError(f"{atom.role} is not a role")
        _check_arg(atom.left, False)
        _check_arg(atom.right, k == CROLE)
    elif isinstance(atom, EqualityAtom):
        _check_arg(atom.left, False)
        _check_arg(atom.right, False)
    else:
        raise KindError(f"unknown atom {atom!r}")


def _check_arg(arg, data):
    if data:
        ok = isinstance(arg, Constant) or (isinstance(arg, QVar) and arg.pool == "e")
    else:
        ok = isinstance(arg, str) or (isinstance(arg, QVar) and arg.pool == "i")
    if not ok:
        raise KindError(f"argument {arg!r} has the wrong kind")


def validate_query(q: HOQuery) -> list[Diagnostic]:
    out = []
    for lit in q.literals:
        try:
            _check_ho_atom(lit.atom)
        except KindError as e:
            out.append(Diagnostic(str(e), str(lit)))
    names: dict[str, str] = {}
    for v in q.variables():
        if names.setdefault(v.name, v.pool) != v.pool:
            out.append(Diagnostic(f"variable {v.name} used in two pools"))
    return out
