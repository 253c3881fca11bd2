import pytest

from conftest import family_kb
from kegamma.codec import encode_query
from kegamma.surface import QuerySyntaxError, parse_query
from kegamma.translate import Translator


@pytest.fixture
def tr():
    return Translator(family_kb())


def show(lits):
    return [str(l) for l in lits]


def test_math_notation_matches_printed_literals(tr):
    psi = parse_query("⟨z, x_Eva⟩ ∈ X³_Mother", tr.st.by_key)
    assert show(psi) == ["⟨z, x_Eva⟩ ∈ X³_Mother"]
    assert psi[0].atom.left.is_query and not psi[0].atom.right.is_query


def test_ascii_notation(tr):
    psi = parse_query("<z,Eva> in X3_Mother & z = Ann", tr.st.by_key)
    assert show(psi) == ["⟨z, x_Eva⟩ ∈ X³_Mother", "z = x_Ann"]
    assert psi[0].atom.left == psi[1].atom.left


@pytest.mark.parametrize("text", ["", "λ", "  "])
def test_empty_query(tr, text):
    assert parse_query(text, tr.st.by_key) == []


def test_negations(tr):
    k = tr.st.by_key
    assert show(parse_query("¬⟨Ann,Eva⟩ ∈ X³_Mother", k)) == ["¬(⟨x_Ann, x_Eva⟩ ∈ X³_Mother)"]
    assert parse_query("⟨Ann,Eva⟩ ∉ Mother", k) == parse_query("not <Ann,Eva> in Mother", k)
    assert show(parse_query("Ann ≠ Eva", k)) == ["¬(x_Ann = x_Eva)"]


def test_pools_and_markers(tr):
    psi = parse_query("?e:w ∈ ?d:k", tr.st.by_key, lambda q, s: tr.st.marker(q))
    assert tr.st.query_vars[psi[0].atom.set].pool == "d"
    assert tr.st.query_vars[psi[0].atom.elem].pool == "e"
    with pytest.raises(QuerySyntaxError):
        parse_query("z ∈ ?ar:k", tr.st.by_key)
    with pytest.raises(QuerySyntaxError):
        parse_query("?zz:k ∈ C", tr.st.by_key)


def test_forced_variable_shadows_a_name(tr):
    (l,) = parse_query("⟨?Ann, Eva⟩ ∈ Mother", tr.st.by_key)
    assert l.atom.left.is_query


def test_internal_coding(tr):
    psi = parse_query("⟨z, x_Eva⟩ ∈ X³_Mother", tr.st.by_key)
    again = parse_query(encode_query(psi), tr.st.by_key)
    assert again == psi


@pytest.mark.parametrize("text", ["⟨z, Eva ∈ Mother", "z ∈", "z ∈ C C", "∧ z ∈ C", "⟨z⟩ ∈ R"])
def test_syntax_errors(tr, text):
    with pytest.raises(QuerySyntaxError):
        parse_query(text, tr.st.by_key)
