import itertools
import random

import pytest

from conftest import family_kb
from kegamma.codec import encode, encode_conjunction
from kegamma.core import (
    Clause,
    Conjunction,
    Var,
    eq,
    ind,
    member,
    normalize_cnf,
    pair_member,
    qvar,
    relvar,
    setvar,
)
from kegamma.dl import (
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
    Signature,
    SomeValues,
    Top,
    UniversalRole,
)
from kegamma.oracle import DLInterpretation, Interpretation, dl_satisfies, evaluate
from kegamma.translate import (
    AUX,
    BUILTIN,
    TranslationError,
    Translator,
    UnknownName,
    theta_assertion,
    theta_axiom,
    theta_kb,
)

A, B, C = Concept("A"), Concept("B"), Concept("C")
R, S = RoleName("R"), RoleName("S")
P = ConcreteRole("P")
t = DataRange("t")
e1, e2 = Constant("1", "integer"), Constant("2", "integer")
Mother, Relative = relvar("Mother"), relvar("Relative")


def test_family_phi_matches_the_worked_example():
    phi, st = theta_kb(family_kb())
    Ann, Eva = st.lookup(0, "Ann"), st.lookup(0, "Eva")
    z1, z2 = qvar("z1"), qvar("z2")
    assert list(phi) == [
        pair_member(Eva, Ann, Mother, False),
        pair_member(Ann, Ann, Relative),
        pair_member(Eva, Eva, Relative),
        Clause((z1, z2), (pair_member(z1, z2, Mother, False), pair_member(z1, z2, Relative))),
    ]
    assert (Ann.ordinal, Eva.ordinal) == (0, 1)


def test_empty_kb():
    phi, _ = theta_kb(KnowledgeBase())
    assert len(phi) == 0


def test_role_inclusion_schema():
    out = theta_axiom(RoleInclusion(RoleName("Mother"), RoleName("Relative")))
    assert [str(p) for p in out] == ["(∀z1)(∀z2)(¬(⟨z1, z2⟩ ∈ X³_Mother) ∨ ⟨z1, z2⟩ ∈ X³_Relative)"]


def test_reflexive_role_schema():
    out = theta_axiom(RoleProperty("Ref", RoleName("Relative")))
    assert [str(p) for p in out] == ["(∀z1)(⟨z1, z1⟩ ∈ X³_Relative)"]


def test_min_one_has_no_equalities():
    out = theta_axiom(ConceptInclusion(MinCard(1, R, Top()), C))
    assert [str(p) for p in out] == [
        "(∀z1)(∀z2)(¬(⟨z1, z2⟩ ∈ X³_R) ∨ ¬(z2 ∈ X¹_⊤) ∨ z1 ∈ X¹_C)",
        "(∀z3)(z3 ∈ X¹_⊤)",
    ]


def test_max_two_schema_shape():
    out = theta_axiom(ConceptInclusion(A, MaxCard(2, R, B)))
    (c,) = out
    assert len(c.qvars) == 4
    assert len(c.disjuncts) == 1 + 3 + 3 + 3


def test_negation_definition_clauses():
    out = theta_axiom(ConceptInclusion(Neg(A), B))
    assert [str(p) for p in out] == [
        "(∀z1)(¬(z1 ∈ X¹_not(A)) ∨ z1 ∈ X¹_B)",
        "(∀z2)(z2 ∈ X¹_not(A) ∨ z2 ∈ X¹_A)",
        "(∀z3)(¬(z3 ∈ X¹_not(A)) ∨ ¬(z3 ∈ X¹_A))",
    ]


def test_nominal_definition_clauses():
    tr = Translator(KnowledgeBase.build([ConceptInclusion(Nominal("a"), A)]))
    phi = tr.phi()
    a = tr.st.lookup(0, "a")
    assert member(a, tr.st.lookup(1, "one(a)")) in phi.literals


def test_assertions():
    tr = Translator(KnowledgeBase.build([ConceptAssertion("a", A)]))
    a = tr.st.lookup(0, "a")
    assert theta_assertion(RoleAssertion(Relative_role := RoleName("Relative"), "a", "a"), tr) == \
        pair_member(a, a, relvar("Relative"))
    assert theta_assertion(RoleAssertion(RoleName("Mother"), "b", "a", False), tr) == \
        pair_member(tr.st.lookup(0, "b"), a, Mother, False)
    assert theta_assertion(SameIndividual("a", "a"), tr) == eq(a, a)
    assert theta_assertion(DifferentIndividuals("a", "b"), tr) == eq(a, tr.st.lookup(0, "b"), False)
    assert theta_assertion(ConceptAssertion("a", Neg(A)), tr) == member(a, setvar("A"), False)
    x = theta_assertion(ConceptAssertion(e1, t), tr)
    assert x.atom.elem.name == "1^^integer" and x.atom.set == setvar("t")


def test_builtins_only_when_used():
    tr = Translator(KnowledgeBase.build([ConceptInclusion(A, B)]))
    assert tr.st.lookup(1, "⊤") is None
    tr = Translator(KnowledgeBase.build([ConceptInclusion(A, Top())]))
    assert tr.st.kind_of[tr.st.lookup(1, "⊤")] == BUILTIN


def test_definitions_are_emitted_once():
    tr = Translator(KnowledgeBase.build([ConceptInclusion(Neg(A), B),
                                         ConceptInclusion(C, Neg(A))]))
    phi = tr.phi()
    assert len(phi) == 2 + 2


def test_rule_translation():
    p, h = QVar("p"), QVar("h")
    rule = Rule((HOLiteral(ConceptAtom(Concept("Person"), p)),
                 HOLiteral(RoleAtom(RoleName("hasHome"), p, h), False)),
                (HOLiteral(ConceptAtom(Concept("HomelessPerson"), p)),))
    (c,) = theta_axiom(rule)
    assert str(c) == ("(∀z1)(∀z2)(¬(z1 ∈ X¹_Person) ∨ ⟨z1, z2⟩ ∈ X³_hasHome ∨ "
                      "z1 ∈ X¹_HomelessPerson)")
    (c,) = theta_axiom(Rule((), (HOLiteral(ConceptAtom(C, QVar("x"))),)))
    assert str(c) == "(∀z1)(z1 ∈ X¹_C)"


def test_query_translation_shares_markers():
    tr = Translator(family_kb())
    z = QVar("z")
    psi = tr.query(HOQuery(HOLiteral(RoleAtom(RoleName("Mother"), z, "Eva")),
                           HOLiteral(RoleAtom(RoleName("Relative"), z, z))))
    assert str(psi[0]) == "⟨z, x_Eva⟩ ∈ X³_Mother"
    assert psi[0].atom.left is psi[1].atom.left or psi[0].atom.left == psi[1].atom.left
    assert psi[1].atom.left == psi[1].atom.right and psi[0].atom.left.is_query
    assert tr.query(HOQuery(HOLiteral(EqualityAtom("Ann", "Eva"))))[0] == \
        eq(tr.st.lookup(0, "Ann"), tr.st.lookup(0, "Eva"))
    neg = tr.query(HOQuery(HOLiteral(RoleAtom(RoleName("Mother"), "Ann", "Eva"), False)))
    assert not neg[0].positive


def test_query_unknown_names():
    tr = Translator(family_kb())
    with pytest.raises(UnknownName):
        tr.query(HOQuery(HOLiteral(ConceptAtom(Concept("Nope"), QVar("z")))))
    with pytest.raises(UnknownName):
        tr.query(HOQuery(HOLiteral(RoleAtom(RoleName("Mother"), "Bob", QVar("z")))))


def test_query_with_compound_term_extends_phi():
    tr = Translator(family_kb())
    before = len(tr.phi())
    tr.query(HOQuery(HOLiteral(RoleAtom(Inverse(RoleName("Mother")), QVar("z"), "Ann"))))
    assert len(tr.phi()) == before + 2


def test_translation_is_deterministic():
    kb = KnowledgeBase.build([ConceptInclusion(Conj(A, Neg(B)), AllValues(R, C)),
                              ConceptAssertion("a", A), RoleAssertion(R, "a", "b")])
    assert encode_conjunction(Translator(kb).phi()) == encode_conjunction(Translator(kb).phi())


def test_symbol_table_is_injective():
    tr = Translator(KnowledgeBase.build([ConceptInclusion(Neg(A), Conj(A, B)),
                                         RoleInclusion(Inverse(R), Neg(R))]))
    keys = list(tr.st.by_key)
    assert len(set(tr.st.by_key.values())) == len(keys)
    assert len(set(map(str, tr.st.term_of.values()))) == len(keys)


def test_name_clash_between_term_and_name():
    tr = Translator()
    tr.set_of(Neg(A))
    with pytest.raises(TranslationError):
        tr.st.intern(1, "not(A)", Concept("not(A)"), "concept")


# -- faithfulness of every schema to the DL semantics --------------------------

INDS = ("a", "b")
CONSTS = (e1, e2)

SCHEMAS = [
    ConceptInclusion(A, B),
    ConceptEquivalence(A, Neg(B)),
    ConceptInclusion(A, AllValues(R, B)),
    ConceptInclusion(SomeValues(R, A), B),
    ConceptInclusion(MinCard(1, R, A), B),
    ConceptInclusion(MinCard(2, R, A), B),
    ConceptInclusion(A, MaxCard(1, R, B)),
    ConceptInclusion(A, MaxCard(2, R, B)),
    ConceptInclusion(Conj(A, Disj(B, Neg(C))), Top()),
    ConceptInclusion(Disj(A, Bottom()), Conj(B, C)),
    ConceptInclusion(Nominal("a", "b"), A),
    ConceptInclusion(A, Nominal("a")),
    ConceptInclusion(SelfRestriction(R), A),
    ConceptInclusion(A, HasValue(R, "b")),
    ConceptInclusion(HasValue(P, e1), A),
    RoleInclusion(R, S),
    RoleEquivalence(R, Inverse(S)),
    RoleInclusion(Neg(R), Disj(S, UniversalRole())),
    RoleInclusion(Conj(R, S), R),
    RoleInclusion(DomainRestriction(R, A), S),
    RoleInclusion(RangeRestriction(R, A), S),
    RoleInclusion(Restriction(R, A, B), S),
    RoleInclusion(IdentityRole(A), R),
    RoleInclusion(R, Product(A, B)),
    RoleEquivalence(R, Product(A, B)),
    RoleChain((R, S), R),
    RoleChain((R, S, R), S),
    RoleProperty("Sym", R),
    RoleProperty("Asym", R),
    RoleProperty("Ref", R),
    RoleProperty("Irref", R),
    RoleProperty("Tra", R),
    RoleProperty("Fun", R),
    RoleProperty("Fun", Inverse(R)),
    RoleProperty("Fun", P),
    DisjointRoles(R, S),
    ConceptInclusion(t, Neg(DataOneOf(e1))),
    ConceptEquivalence(t, Conj(t, DataRange("u"))),
    ConceptInclusion(A, AllValues(P, t)),
    ConceptInclusion(SomeValues(P, t), A),
    ConceptInclusion(MinCard(2, P, t), A),
    ConceptInclusion(A, MaxCard(1, P, t)),
    RoleInclusion(Restriction(P, A, t), P),
    ConceptAssertion("a", Neg(Conj(A, B))),
    ConceptAssertion("a", SelfRestriction(R), False),
    RoleAssertion(Inverse(R), "a", "b"),
    RoleAssertion(P, "a", e2),
    ConceptAssertion(e1, t),
    SameIndividual("a", "b"),
    DifferentIndividuals("a", "b"),
]


def random_dl_interpretation(rng):
    n = rng.randint(1, 3)
    D = tuple(range(n))
    pairs = list(itertools.product(D, D))
    sub = lambda xs: frozenset(x for x in xs if rng.random() < 0.5)
    return DLInterpretation(
        D,
        {**{a: rng.choice(D) for a in INDS}, **{c: rng.choice(D) for c in CONSTS}},
        {n: sub(D) for n in ("A", "B", "C", "t", "u")},
        {n: sub(pairs) for n in ("R", "S", "P")},
    )


def lift(I, st):
    """The set-theoretic interpretation matching ``I`` on every symbol."""
    from kegamma.oracle import ext
    m0, m1, m3 = {}, {}, {}
    for v, term in st.term_of.items():
        if v.sort == 0:
            m0[v] = I.individuals[term]
        elif v.sort == 1:
            m1[v] = ext(term, I)
        else:
            m3[v] = ext(term, I)
    return Interpretation(I.domain, m0, m1, m3)


def _translator():
    sig = Signature(individuals=INDS, concepts=("A", "B", "C"), roles=("R", "S"),
                    concrete_roles=("P",), datatypes=("t", "u"), constants=CONSTS)
    return Translator(KnowledgeBase(signature=sig))


@pytest.mark.parametrize("ax", SCHEMAS, ids=str)
def test_schema_agrees_with_dl_semantics(ax):
    rng = random.Random(str(ax))
    tr = _translator()
    if isinstance(ax, (ConceptAssertion, RoleAssertion, SameIndividual, DifferentIndividuals)):
        image = Conjunction((tr.assertion(ax),))
        image = normalize_cnf(list(image) + tr.definitions)
    else:
        image = theta_axiom(ax, tr)
    for _ in range(150):
        I = random_dl_interpretation(rng)
        J = lift(I, tr.st)
        assert evaluate(image, J) == dl_satisfies(ax, I), I


@pytest.mark.parametrize("ax", SCHEMAS, ids=str)
def test_definitions_pin_auxiliary_symbols(ax):
    rng = random.Random("pin" + str(ax))
    tr = _translator()
    if isinstance(ax, (ConceptAssertion, RoleAssertion, SameIndividual, DifferentIndividuals)):
        tr.assertion(ax)
    else:
        tr.axiom(ax)
    defs = normalize_cnf(tr.definitions) if tr.definitions else Conjunction()
    aux = [v for v, k in tr.st.kind_of.items() if k in (AUX, BUILTIN)]
    for _ in range(40):
        I = random_dl_interpretation(rng)
        J = lift(I, tr.st)
        assert evaluate(defs, J)
        for v in aux:
            table = J.m1 if v.sort == 1 else J.m3
            universe = I.domain if v.sort == 1 else list(itertools.product(I.domain, I.domain))
            x = rng.choice(list(universe))
            old = table[v]
            table[v] = old ^ {x}
            assert not evaluate(defs, J), (v, x)
            table[v] = old
