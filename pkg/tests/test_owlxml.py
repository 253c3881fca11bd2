import pytest

from conftest import FIXTURES, family_kb
from kegamma.codec import encode_conjunction
from kegamma.dl import validate_kb
from kegamma.owlxml import OUTSIDE, OwlXmlError, parse_owlxml, parse_swrl_rule
from kegamma.translate import Translator, theta_axiom, theta_kb

HEAD = '<Ontology xmlns="http://www.w3.org/2002/07/owl#" ontologyIRI="http://e.org/o">{}</Ontology>'


def parse(body):
    return parse_owlxml(HEAD.format(body).encode())


def shown(body):
    r = parse(body)
    return [str(s) for s in r.kb.statements], [str(d) for d in r.diagnostics]


def test_family_ontology_translates_to_the_worked_example():
    r = parse_owlxml(str(FIXTURES / "family.owl"))
    assert r.ok and not r.notices
    assert encode_conjunction(Translator(r.kb).phi()) == \
        encode_conjunction(theta_kb(family_kb())[0])


def test_empty_ontology():
    r = parse("")
    assert r.ok and r.kb.statements == ()


def test_right_hand_existential_is_rejected():
    r = parse_owlxml(str(FIXTURES / "rhs_existential.owl"))
    assert not r.ok and r.kb.statements == ()
    assert str(r.diagnostics[0]).startswith("line 8: ObjectSomeValuesFrom: " + OUTSIDE)


def test_builtin_atom_is_rejected():
    r = parse_owlxml(str(FIXTURES / "builtin_rule.owl"))
    assert not r.ok and "BuiltInAtom" in str(r.diagnostics[0])


@pytest.mark.parametrize("body,expected", [
    ('<ObjectPropertyDomain><ObjectProperty IRI="#R"/><Class IRI="#C"/></ObjectPropertyDomain>',
     ["∃R.⊤ ⊑ C"]),
    ('<ObjectPropertyRange><ObjectProperty IRI="#R"/><Class IRI="#C"/></ObjectPropertyRange>',
     ["⊤ ⊑ ∀R.C"]),
    ('<DisjointClasses><Class IRI="#A"/><Class IRI="#B"/><Class IRI="#C"/></DisjointClasses>',
     ["A ⊑ ¬B", "A ⊑ ¬C", "B ⊑ ¬C"]),
    ('<InverseObjectProperties><ObjectProperty IRI="#R"/><ObjectProperty IRI="#S"/>'
     '</InverseObjectProperties>', ["R ≡ S⁻"]),
    ('<SubObjectPropertyOf><ObjectPropertyChain><ObjectProperty IRI="#R"/>'
     '<ObjectProperty IRI="#S"/></ObjectPropertyChain><ObjectProperty IRI="#T"/>'
     '</SubObjectPropertyOf>', ["R ∘ S ⊑ T"]),
    ('<TransitiveObjectProperty><ObjectProperty IRI="#R"/></TransitiveObjectProperty>',
     ["Tra(R)"]),
    ('<InverseFunctionalObjectProperty><ObjectProperty IRI="#R"/>'
     '</InverseFunctionalObjectProperty>', ["Fun(R⁻)"]),
    ('<SubClassOf><ObjectSomeValuesFrom><ObjectProperty IRI="#R"/><Class IRI="#D"/>'
     '</ObjectSomeValuesFrom><Class IRI="#C"/></SubClassOf>', ["∃R.D ⊑ C"]),
    ('<SubClassOf><Class IRI="#C"/><ObjectAllValuesFrom><ObjectProperty IRI="#R"/>'
     '<Class IRI="#D"/></ObjectAllValuesFrom></SubClassOf>', ["C ⊑ ∀R.D"]),
    ('<SubClassOf><Class IRI="#C"/><ObjectMaxCardinality cardinality="2">'
     '<ObjectProperty IRI="#R"/><Class IRI="#D"/></ObjectMaxCardinality></SubClassOf>',
     ["C ⊑ ≤2R.D"]),
    ('<ClassAssertion><ObjectOneOf><NamedIndividual IRI="#a"/></ObjectOneOf>'
     '<NamedIndividual IRI="#b"/></ClassAssertion>', ["b : {a}"]),
    ('<DataPropertyAssertion><DataProperty IRI="#age"/><NamedIndividual IRI="#a"/>'
     '<Literal datatypeIRI="http://www.w3.org/2001/XMLSchema#integer">3</Literal>'
     '</DataPropertyAssertion>', ['(a, "3"^^integer) : age']),
])
def test_supported_constructs(body, expected):
    assert shown(body) == (expected, [])


@pytest.mark.parametrize("body,fragment", [
    ('<SubClassOf><ObjectAllValuesFrom><ObjectProperty IRI="#R"/><Class IRI="#D"/>'
     '</ObjectAllValuesFrom><Class IRI="#C"/></SubClassOf>', OUTSIDE),
    ('<SubClassOf><Class IRI="#C"/><ObjectMaxCardinality cardinality="9">'
     '<ObjectProperty IRI="#R"/><Class IRI="#D"/></ObjectMaxCardinality></SubClassOf>',
     "exceeds the configured maximum"),
    ('<ClassAssertion><Class IRI="#C"/><AnonymousIndividual nodeID="x"/></ClassAssertion>',
     "anonymous individuals"),
    ('<HasKey><Class IRI="#C"/><ObjectProperty IRI="#R"/></HasKey>', OUTSIDE),
])
def test_unsupported_constructs_are_diagnosed(body, fragment):
    stmts, diags = shown(body)
    assert stmts == [] and len(diags) == 1
    assert fragment in diags[0] and "line 1" in diags[0]


def test_annotations_are_skipped_with_a_notice():
    r = parse('<AnnotationAssertion><AnnotationProperty IRI="#l"/><IRI>#C</IRI>'
              '<Literal>x</Literal></AnnotationAssertion>')
    assert r.ok and r.kb.statements == () and r.notices == ["line 1: AnnotationAssertion skipped"]


def test_colliding_local_names_get_a_suffix():
    r = parse('<ClassAssertion><Class IRI="http://x.org/a#C"/><NamedIndividual IRI="#a"/>'
              '</ClassAssertion><ClassAssertion><Class IRI="http://y.org/b#C"/>'
              '<NamedIndividual IRI="#a"/></ClassAssertion>')
    assert [str(s) for s in r.kb.statements] == ["a : C", "a : C_2"]


def test_malformed_xml_aborts():
    with pytest.raises(OwlXmlError):
        parse_owlxml(b"<Ontology><x></Ontology>")
    with pytest.raises(OwlXmlError):
        parse_owlxml(b"<NotAnOntology/>")


def test_rules():
    rule = parse_swrl_rule(
        '<DLSafeRule xmlns="http://www.w3.org/2002/07/owl#"><Body><ClassAtom>'
        '<Class IRI="#Person"/><Variable IRI="urn:swrl#p"/></ClassAtom><ClassAtom>'
        '<ObjectComplementOf><Class IRI="#Housed"/></ObjectComplementOf>'
        '<Variable IRI="urn:swrl#p"/></ClassAtom></Body><Head><ClassAtom>'
        '<Class IRI="#HomelessPerson"/><Variable IRI="urn:swrl#p"/></ClassAtom></Head>'
        '</DLSafeRule>')
    assert str(rule) == "Person(?p) ∧ ¬Housed(?p) ⇒ HomelessPerson(?p)"
    (c,) = theta_axiom(rule)
    assert str(c) == "(∀z1)(¬(z1 ∈ X¹_Person) ∨ z1 ∈ X¹_Housed ∨ z1 ∈ X¹_HomelessPerson)"
    stmts, diags = shown('<DLSafeRule><Body/><Head><ClassAtom><Class IRI="#C"/>'
                         '<Variable IRI="urn:swrl#x"/></ClassAtom></Head></DLSafeRule>')
    assert stmts == ["⊤ ⇒ C(?x)"] and diags == []


def test_ingestion_is_deterministic_and_valid():
    data = (FIXTURES / "family.owl").read_bytes()
    a, b = parse_owlxml(data), parse_owlxml(data)
    assert a.kb == b.kb
    assert validate_kb(a.kb) == []
