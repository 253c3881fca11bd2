import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import family_kb, parts
from kegamma.core import Clause, Conjunction, Var, eq, ind, member, pair_member, relvar
from kegamma.engine import saturate
from kegamma.oracle import (
    Interpretation,
    OracleError,
    branch_model,
    evaluate,
    find_model,
    oracle_answers,
    oracle_consistent,
    partitions,
)
from kegamma.translate import Translator, theta_kb

Ann, Eva = ind("Ann", 0), ind("Eva", 1)
Mother, Relative = relvar("Mother"), relvar("Relative")


def family_model(relative):
    return Interpretation(("d1", "d2"), {Eva: "d1", Ann: "d2"}, {},
                          {Mother: frozenset({("d2", "d1")}), Relative: frozenset(relative)})


def test_reflexive_equality_is_true():
    assert evaluate(eq(Ann, Ann), Interpretation(("d",), {Ann: "d"}))


def test_family_model():
    phi = theta_kb(family_kb())[0]
    assert evaluate(phi, family_model({("d2", "d2"), ("d1", "d1"), ("d2", "d1")}))
    assert not evaluate(phi, family_model({("d2", "d2"), ("d1", "d1")}))


def test_unassigned_individual():
    with pytest.raises(OracleError):
        evaluate(eq(Ann, Eva), Interpretation(("d",), {Ann: "d"}))


@pytest.mark.parametrize("n,bell", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52)])
def test_partition_counts(n, bell):
    ps = list(partitions(n))
    assert len(ps) == len(set(ps)) == bell


def test_consistency_examples():
    phi = theta_kb(family_kb())[0]
    assert oracle_consistent(phi)
    extra = Conjunction(tuple(phi) + (pair_member(Ann, Eva, Mother),
                                      pair_member(Ann, Eva, Relative, False)))
    assert not oracle_consistent(extra)


def test_semantic_answers_include_both_mothers():
    tr = Translator(family_kb())
    z = Var(0, "z", "query")
    got = oracle_answers([pair_member(z, Eva, Mother)], tr.phi())
    assert got == {frozenset({(z, Ann)}), frozenset({(z, Eva)})}


def test_bound():
    pool = [ind(f"a{i}", i) for i in range(4)]
    phi = Conjunction(tuple(eq(pool[i], pool[i + 1], False) for i in range(3)))
    with pytest.raises(OracleError):
        find_model(phi, bound=3)
    assert oracle_consistent(phi, bound=4)


def test_branch_model_of_the_right_branch():
    phi = theta_kb(family_kb())[0]
    tab = saturate(phi)
    for b in tab.open_branches:
        assert evaluate(phi, branch_model(b, phi, tab.pool))


# -- independent evaluator for differential testing ---------------------------

def direct(p, I):
    def holds(lit, env):
        v = lambda x: env.get(x, I.m0.get(x)) if x.sort == 0 else \
            (I.m1 if x.sort == 1 else I.m3).get(x, frozenset())
        a = lit.atom
        args = a.args
        if type(a).__name__ == "Eq":
            r = v(args[0]) == v(args[1])
        elif type(a).__name__ == "In1":
            r = v(args[0]) in v(args[1])
        else:
            r = (v(args[0]), v(args[1])) in v(args[2])
        return r if lit.positive else not r

    if isinstance(p, Clause):
        def rec(i, env):
            if i == len(p.qvars):
                return any(holds(l, env) for l in p.disjuncts)
            return all(rec(i + 1, {**env, p.qvars[i]: d}) for d in I.domain)
        return rec(0, {})
    return holds(p, {})


def random_interp(rng, extra=()):
    D = tuple(range(rng.randint(1, 3))) + tuple(extra)
    core = [d for d in D if d not in extra]
    m0 = {Var(0, n, "free", i): rng.choice(core) for i, n in enumerate("abcd")}
    sub = lambda xs: frozenset(x for x in xs if rng.random() < 0.5)
    m1 = {Var(1, n, "free", i): sub(core) for i, n in enumerate("CDE")}
    m3 = {Var(3, n, "free", i): sub(itertools.product(core, core)) for i, n in enumerate("RS")}
    return Interpretation(D, m0, m1, m3)


@settings(max_examples=300)
@given(parts, st.integers(0, 10**6))
def test_evaluate_agrees_with_direct_evaluator(p, seed):
    I = random_interp(random.Random(seed))
    assert evaluate(p, I) == direct(p, I)


@settings(max_examples=300)
@given(st.lists(parts, min_size=1, max_size=3), st.integers(0, 10**6))
def test_unused_element_and_conjunction(ps, seed):
    I = random_interp(random.Random(seed))
    assert evaluate(Conjunction(tuple(ps)), I) == all(evaluate(p, I) for p in ps)
    ground = [p for p in ps if not isinstance(p, Clause) or not p.qvars]
    J = random_interp(random.Random(seed), extra=("fresh",))
    assert all(evaluate(p, I) == evaluate(p, J) for p in ground)
