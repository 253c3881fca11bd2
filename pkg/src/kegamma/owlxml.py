"""OWL 2 OWL/XML ingestion, including SWRL ``DLSafeRule`` elements.

Only the constructs the description logic admits are mapped; everything
else becomes a :class:`~kegamma.dl.Diagnostic` carrying the source line.
Class expressions that quantify over a role are accepted only where the
grammar allows them: universal and at-most restrictions as the whole
right-hand side of an inclusion, existential and at-least restrictions as
the whole left-hand side.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from xml.parsers import expat

from . import dl
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
    Diagnostic,
    DifferentIndividuals,
    Disj,
    DisjointRoles,
    EqualityAtom,
    HasValue,
    HOLiteral,
    Inverse,
    KnowledgeBase,
    MaxCard,
    MinCard,
    Neg,
    Nominal,
    QVar,
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

log = logging.getLogger(__name__)

OWL = "http://www.w3.org/2002/07/owl#"
OUTSIDE = "outside DL_D^{4,×} requirements"

SKIPPED = {"Annotation", "AnnotationAssertion", "SubAnnotationPropertyOf",
           "AnnotationPropertyDomain", "AnnotationPropertyRange", "Import", "Prefix"}

DEFAULT_PREFIXES = {
    "owl": OWL,
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}

PROPERTY_FLAGS = {
    "SymmetricObjectProperty": "Sym", "AsymmetricObjectProperty": "Asym",
    "ReflexiveObjectProperty": "Ref", "IrreflexiveObjectProperty": "Irref",
    "TransitiveObjectProperty": "Tra", "FunctionalObjectProperty": "Fun",
    "FunctionalDataProperty": "Fun",
}


class OwlXmlError(ValueError):
    """The document is not well-formed XML or not an ontology."""


class _Reject(Exception):
    pass


@dataclass
class OwlResult:
    kb: KnowledgeBase
    diagnostics: list = field(default_factory=list)
    notices: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.diagnostics


def _local(tag):
    return tag.rsplit("}", 1)[-1]


def _read_tree(data: bytes):
    """ElementTree plus a line number per element."""
    builder = ET.TreeBuilder()
    lines = {}
    p = expat.ParserCreate(namespace_separator="}")

    def start(tag, attrs):
        if "}" in tag:
            tag = "{" + tag
        attrs = {(("{" + k) if "}" in k else k): v for k, v in attrs.items()}
        lines[id(builder.start(tag, attrs))] = p.CurrentLineNumber

    def end(tag):
        builder.end(("{" + tag) if "}" in tag else tag)

    p.StartElementHandler = start
    p.EndElementHandler = end
    p.CharacterDataHandler = builder.data
    try:
        p.Parse(data, True)
    except expat.ExpatError as e:
        raise OwlXmlError(f"malformed XML: {e}") from e
    return builder.close(), lines


class _Reader:
    def __init__(self, lines):
        self.lines = lines
        self.prefixes: dict[str, str] = {}
        self.short: dict[str, str] = {}
        self.taken: dict[str, str] = {}
        self.notices: list = []
        self.declared = {k: {} for k in ("individuals", "concepts", "roles",
                                          "concrete_roles", "datatypes")}

    def where(self, el):
        return f"line {self.lines.get(id(el), '?')}: {_local(el.tag)}"

    # -- names -----------------------------------------------------------

    def iri(self, el):
        if "IRI" in el.attrib:
            full = el.attrib["IRI"]
            if ":" not in full:
                full = self.prefixes.get("", "") + full.lstrip("#")
        elif "abbreviatedIRI" in el.attrib:
            pfx, _, rest = el.attrib["abbreviatedIRI"].partition(":")
            full = self.prefixes.get(pfx, pfx + ":") + rest
        else:
            raise _Reject(f"{self.where(el)} without IRI")
        return full

    def name(self, el):
        full = self.iri(el)
        if full in self.short:
            return self.short[full]
        local = full
        for sep in ("#", "/", ":"):
            if sep in local:
                local = local.rsplit(sep, 1)[-1]
        local = local or full
        base, n = local, 1
        while local in self.taken and self.taken[local] != full:
            n += 1
            local = f"{base}_{n}"
        if local != base:
            self.notices.append(f"IRI {full} shortened to {local} (name collision)")
            log.warning("IRI %s shortened to %s", full, local)
        self.taken[local] = full
        self.short[full] = local
        return local

    def declare(self, pool, name):
        self.declared[pool].setdefault(name, None)

    # -- expressions -----------------------------------------------------

    def individual(self, el):
        t = _local(el.tag)
        if t == "NamedIndividual":
            n = self.name(el)
            self.declare("individuals", n)
            return n
        if t == "AnonymousIndividual":
            raise _Reject(f"{self.where(el)}: anonymous individuals are not supported")
        raise _Reject(f"{self.where(el)}: expected an individual")

    def literal(self, el):
        if _local(el.tag) != "Literal":
            raise _Reject(f"{self.where(el)}: expected a literal")
        dt = el.attrib.get("datatypeIRI", "string")
        for sep in ("#", "/", ":"):
            dt = dt.rsplit(sep, 1)[-1]
        return Constant(el.text or "", dt)

    def object_property(self, el):
        t = _local(el.tag)
        if t == "ObjectProperty":
            if self.iri(el) == OWL + "topObjectProperty":
                return UniversalRole()
            n = self.name(el)
            self.declare("roles", n)
            return RoleName(n)
        if t == "ObjectInverseOf":
            return Inverse(self.object_property(_kids(el)[0]))
        raise _Reject(f"{self.where(el)}: {OUTSIDE}")

    def data_property(self, el):
        if _local(el.tag) != "DataProperty":
            raise _Reject(f"{self.where(el)}: expected a data property")
        n = self.name(el)
        self.declare("concrete_roles", n)
        return ConcreteRole(n)

    def property(self, el):
        if _local(el.tag) == "DataProperty":
            return self.data_property(el)
        return self.object_property(el)

    def data_range(self, el):
        t = _local(el.tag)
        kids = _kids(el)
        if t == "Datatype":
            n = self.name(el)
            self.declare("datatypes", n)
            return DataRange(n)
        if t == "DataIntersectionOf":
            return Conj(*[self.data_range(k) for k in kids])
        if t == "DataUnionOf":
            return Disj(*[self.data_range(k) for k in kids])
        if t == "DataComplementOf":
            return Neg(self.data_range(kids[0]))
        if t == "DataOneOf":
            return DataOneOf(*[self.literal(k) for k in kids])
        raise _Reject(f"{self.where(el)}: {OUTSIDE}")

    def concept(self, el, side=None):
        """A class expression; ``side`` is ``"left"``/``"right"`` when the
        expression is a whole side of an inclusion."""
        t = _local(el.tag)
        kids = _kids(el)
        if t == "Class":
            full = self.iri(el)
            if full == OWL + "Thing":
                return Top()
            if full == OWL + "Nothing":
                return Bottom()
            n = self.name(el)
            self.declare("concepts", n)
            return Concept(n)
        if t == "ObjectIntersectionOf":
            return Conj(*[self.concept(k) for k in kids])
        if t == "ObjectUnionOf":
            return Disj(*[self.concept(k) for k in kids])
        if t == "ObjectComplementOf":
            return Neg(self.concept(kids[0]))
        if t == "ObjectOneOf":
            return Nominal(*[self.individual(k) for k in kids])
        if t == "ObjectHasSelf":
            return SelfRestriction(self.object_property(kids[0]))
        if t == "ObjectHasValue":
            return HasValue(self.object_property(kids[0]), self.individual(kids[1]))
        if t == "DataHasValue":
            return HasValue(self.data_property(kids[0]), self.literal(kids[1]))
        if t in ("ObjectSomeValuesFrom", "DataSomeValuesFrom"):
            if t == "ObjectSomeValuesFrom" and _local(kids[1].tag) == "ObjectOneOf" \
                    and len(_kids(kids[1])) == 1:
                return HasValue(self.object_property(kids[0]),
                                self.individual(_kids(kids[1])[0]))
            if side != "left":
                raise _Reject(f"{self.where(el)}: {OUTSIDE}: existential quantification "
                              "admitted only as the left-hand side of an inclusion")
            return SomeValues(*self._restriction(t, kids))
        if t in ("ObjectAllValuesFrom", "DataAllValuesFrom"):
            if side != "right":
                raise _Reject(f"{self.where(el)}: {OUTSIDE}: universal restriction "
                              "admitted only as the right-hand side of an inclusion")
            return AllValues(*self._restriction(t, kids))
        if t in ("ObjectMinCardinality", "DataMinCardinality"):
            if side != "left":
                raise _Reject(f"{self.where(el)}: {OUTSIDE}: at-least restriction "
                              "admitted only as the left-hand side of an inclusion")
            return MinCard(_card(el), *self._restriction(t, kids, top=True))
        if t in ("ObjectMaxCardinality", "DataMaxCardinality"):
            if side != "right":
                raise _Reject(f"{self.where(el)}: {OUTSIDE}: at-most restriction "
                              "admitted only as the right-hand side of an inclusion")
            return MaxCard(_card(el), *self._restriction(t, kids, top=True))
        raise _Reject(f"{self.where(el)}: {OUTSIDE}")

    def _restriction(self, t, kids, top=False):
        if t.startswith("Data"):
            role = self.data_property(kids[0])
            if len(kids) < 2:
                raise _Reject("unqualified data cardinality is not supported")
            return role, self.data_range(kids[1])
        role = self.object_property(kids[0])
        filler = self.concept(kids[1]) if len(kids) > 1 else Top()
        return role, filler

    # -- axioms ----------------------------------------------------------

    def axiom(self, el):
        t = _local(el.tag)
        kids = [k for k in _kids(el) if _local(k.tag) != "Annotation"]
        if t == "Declaration":
            k = kids[0]
            pool = {"Class": "concepts", "ObjectProperty": "roles",
                    "DataProperty": "concrete_roles", "NamedIndividual": "individuals",
                    "Datatype": "datatypes"}.get(_local(k.tag))
            if pool is None:
                self.notices.append(f"{self.where(el)}: {_local(k.tag)} declaration skipped")
                return []
            full = self.iri(k)
            if full in (OWL + "Thing", OWL + "Nothing", OWL + "topObjectProperty"):
                return []
            self.declare(pool, self.name(k))
            return []
        if t == "SubClassOf":
            return [ConceptInclusion(self.concept(kids[0], "left"), self.concept(kids[1], "right"))]
        if t == "EquivalentClasses":
            cs = [self.concept(k) for k in kids]
            return [ConceptEquivalence(cs[0], c) for c in cs[1:]]
        if t == "DisjointClasses":
            cs = [self.concept(k) for k in kids]
            return [ConceptInclusion(a, Neg(b)) for i, a in enumerate(cs) for b in cs[i + 1:]]
        if t in ("ObjectPropertyDomain", "DataPropertyDomain"):
            r = self.property(kids[0])
            filler = Top() if t.startswith("Object") else DataRange("Literal")
            if not t.startswith("Object"):
                self.declare("datatypes", "Literal")
            return [ConceptInclusion(SomeValues(r, filler), self.concept(kids[1]))]
        if t == "ObjectPropertyRange":
            return [ConceptInclusion(Top(), AllValues(self.object_property(kids[0]),
                                                      self.concept(kids[1])))]
        if t == "DataPropertyRange":
            return [ConceptInclusion(Top(), AllValues(self.data_property(kids[0]),
                                                      self.data_range(kids[1])))]
        if t in ("SubObjectPropertyOf", "SubDataPropertyOf"):
            if _local(kids[0].tag) == "ObjectPropertyChain":
                chain = tuple(self.object_property(k) for k in _kids(kids[0]))
                return [RoleChain(chain, self.object_property(kids[1]))]
            return [RoleInclusion(self.property(kids[0]), self.property(kids[1]))]
        if t in ("EquivalentObjectProperties", "EquivalentDataProperties"):
            rs = [self.property(k) for k in kids]
            return [RoleEquivalence(rs[0], r) for r in rs[1:]]
        if t in ("DisjointObjectProperties", "DisjointDataProperties"):
            rs = [self.property(k) for k in kids]
            return [DisjointRoles(a, b) for i, a in enumerate(rs) for b in rs[i + 1:]]
        if t == "InverseObjectProperties":
            return [RoleEquivalence(self.object_property(kids[0]),
                                    Inverse(self.object_property(kids[1])))]
        if t in PROPERTY_FLAGS:
            return [RoleProperty(PROPERTY_FLAGS[t], self.property(kids[0]))]
        if t == "InverseFunctionalObjectProperty":
            return [RoleProperty("Fun", Inverse(self.object_property(kids[0])))]
        if t == "ClassAssertion":
            return [ConceptAssertion(self.individual(kids[1]), self.concept(kids[0]))]
        if t in ("ObjectPropertyAssertion", "NegativeObjectPropertyAssertion"):
            r = self.object_property(kids[0])
            a, b = self.individual(kids[1]), self.individual(kids[2])
            if isinstance(r, Inverse):
                r, a, b = r.role, b, a
            return [RoleAssertion(r, a, b, t.startswith("Object"))]
        if t in ("DataPropertyAssertion", "NegativeDataPropertyAssertion"):
            return [RoleAssertion(self.data_property(kids[0]), self.individual(kids[1]),
                                  self.literal(kids[2]), t.startswith("Data"))]
        if t == "SameIndividual":
            inds = [self.individual(k) for k in kids]
            return [SameIndividual(inds[0], b) for b in inds[1:]]
        if t == "DifferentIndividuals":
            inds = [self.individual(k) for k in kids]
            return [DifferentIndividuals(a, b) for i, a in enumerate(inds) for b in inds[i + 1:]]
        if t == "DLSafeRule":
            return [self.rule(el)]
        raise _Reject(f"{self.where(el)}: {OUTSIDE}")

    # -- rules -------------------------------------------------------------

    def rule(self, el):
        body, head = (), ()
        for part in _kids(el):
            t = _local(part.tag)
            if t == "Body":
                body = tuple(self.atom(a) for a in _kids(part))
            elif t == "Head":
                head = tuple(self.atom(a) for a in _kids(part))
        return Rule(body, head)

    def rule_arg(self, el, data=False):
        t = _local(el.tag)
        if t == "Variable":
            return QVar(self.name(el), "e" if data else "i")
        if t == "Literal":
            return self.literal(el)
        return self.individual(el)

    def atom(self, el):
        t = _local(el.tag)
        kids = _kids(el)
        if t == "ClassAtom":
            c, pos = kids[0], True
            if _local(c.tag) == "ObjectComplementOf":
                c, pos = _kids(c)[0], False
            return HOLiteral(ConceptAtom(self.concept(c), self.rule_arg(kids[1])), pos)
        if t == "ObjectPropertyAtom":
            r, pos = kids[0], True
            if _local(r.tag) == "ObjectComplementOf":
                r, pos = _kids(r)[0], False
            return HOLiteral(RoleAtom(self.object_property(r), self.rule_arg(kids[1]),
                                      self.rule_arg(kids[2])), pos)
        if t == "DataPropertyAtom":
            return HOLiteral(RoleAtom(self.data_property(kids[0]), self.rule_arg(kids[1]),
                                      self.rule_arg(kids[2], data=True)))
        if t in ("SameIndividualAtom", "DifferentIndividualsAtom"):
            return HOLiteral(EqualityAtom(self.rule_arg(kids[0]), self.rule_arg(kids[1])),
                             t.startswith("Same"))
        raise _Reject(f"{self.where(el)}: unsupported SWRL atom ({OUTSIDE})")


def _kids(el):
    return list(el)


def _card(el):
    try:
        return int(el.attrib["cardinality"])
    except (KeyError, ValueError) as e:
        raise _Reject(f"bad cardinality on {_local(el.tag)}") from e


def parse_owlxml(source, max_card: int = dl.DEFAULT_MAX_CARD) -> OwlResult:
    """Read an OWL/XML document (path, bytes or str) into a knowledge base.

    Rejected axioms are left out of the result and reported as diagnostics.
    """
    if isinstance(source, str) and not source.lstrip().startswith("<"):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.encode() if isinstance(source, str) else source
    root, lines = _read_tree(data)
    if _local(root.tag) != "Ontology":
        raise OwlXmlError(f"root element is {_local(root.tag)}, expected Ontology")
    r = _Reader(lines)
    r.prefixes.update(DEFAULT_PREFIXES)
    base = root.attrib.get("ontologyIRI", "")
    r.prefixes[""] = base + ("#" if base and not base.endswith(("#", "/")) else "")
    for el in root:
        if _local(el.tag) == "Prefix":
            r.prefixes[el.attrib.get("name", "")] = el.attrib.get("IRI", "")
    statements, diags = [], []
    for el in root:
        t = _local(el.tag)
        if t in SKIPPED:
            if t != "Prefix":
                r.notices.append(f"{r.where(el)} skipped")
            continue
        try:
            stmts = r.axiom(el)
        except _Reject as e:
            diags.append(Diagnostic(str(e)))
            continue
        except IndexError:
            diags.append(Diagnostic(f"{r.where(el)}: missing operand"))
            continue
        for s in stmts:
            try:
                dl._check_statement(s, max_card)
            except dl.KindError as e:
                diags.append(Diagnostic(str(e), r.where(el)))
                continue
            statements.append(s)
    sig = Signature(**{k: tuple(v) for k, v in r.declared.items()},
                    constants=tuple(dl.used_names(statements)["constants"]))
    kb = KnowledgeBase.build(statements, sig)
    diags += dl.validate_kb(kb, max_card)
    return OwlResult(kb, diags, r.notices)


def parse_swrl_rule(el) -> Rule:
    """A single ``DLSafeRule`` element (already parsed) as a :class:`Rule`."""
    if isinstance(el, (str, bytes)):
        el, lines = _read_tree(el.encode() if isinstance(el, str) else el)
    else:
        lines = {}
    try:
        return _Reader(lines).rule(el)
    except _Reject as e:
        raise OwlXmlError(str(e)) from e
