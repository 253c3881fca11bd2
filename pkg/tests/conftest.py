from pathlib import Path

import pytest
from hypothesis import strategies as st

from kegamma.core import FREE, QUANTIFIED, Clause, Eq, In1, In3, Literal, Var
from kegamma.dl import (
    HOLiteral,
    KnowledgeBase,
    QVar,
    RoleAssertion,
    RoleAtom,
    RoleName,
    Rule,
    Signature,
)

FIXTURES = Path(__file__).parent / "fixtures"


def family_kb():
    mother, relative = RoleName("Mother"), RoleName("Relative")
    x, y = QVar("x"), QVar("y")
    stmts = [
        RoleAssertion(mother, "Eva", "Ann", positive=False),
        RoleAssertion(relative, "Ann", "Ann"),
        RoleAssertion(relative, "Eva", "Eva"),
        Rule((HOLiteral(RoleAtom(mother, x, y)),), (HOLiteral(RoleAtom(relative, x, y)),)),
    ]
    sig = Signature(individuals=("Ann", "Eva"), roles=("Mother", "Relative"))
    return KnowledgeBase.build(stmts, sig)


@pytest.fixture
def family():
    return family_kb()


@pytest.fixture
def fixtures():
    return FIXTURES


# -- hypothesis strategies for the set-theoretic syntax ----------------------

NAMES0 = ["a", "b", "c", "d"]
NAMES1 = ["C", "D", "E"]
NAMES3 = ["R", "S"]

free0 = st.sampled_from([Var(0, n, FREE, i) for i, n in enumerate(NAMES0)])
free1 = st.sampled_from([Var(1, n, FREE, i) for i, n in enumerate(NAMES1)])
free3 = st.sampled_from([Var(3, n, FREE, i) for i, n in enumerate(NAMES3)])


def atoms(zero):
    return st.one_of(
        st.builds(Eq, zero, zero),
        st.builds(In1, zero, free1),
        st.builds(In3, zero, zero, free3),
    )


def literals(zero=free0):
    return st.builds(Literal, atoms(zero), st.booleans())


@st.composite
def clauses(draw, max_vars=3):
    m = draw(st.integers(0, max_vars))
    qs = [Var(0, f"z{i + 1}", QUANTIFIED, i) for i in range(m)]
    zero = st.sampled_from(qs) | free0 if qs else free0
    body = draw(st.lists(literals(zero), min_size=1, max_size=4))
    used = {v for l in body for v in l.vars}
    missing = [q for q in qs if q not in used]
    for q in missing:
        body.append(Literal(In1(q, draw(free1)), draw(st.booleans())))
    if not qs and len(body) == 1:
        body.append(draw(literals()))
    return Clause(tuple(qs), tuple(body))


parts = st.one_of(literals(), clauses())


# -- acceptance report ----------------------------------------------------------

ACCEPTANCE: dict = {}


def report(n, ok, detail):
    """Record and print the verdict line for acceptance criterion ``n``."""
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
