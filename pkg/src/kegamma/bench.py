"""Knowledge-base generators and the kegamma/classicke comparison harness."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass

from . import dl
from .dl import (
    AllValues,
    Bottom,
    Concept,
    ConceptAssertion,
    ConceptAtom,
    ConceptEquivalence,
    ConceptInclusion,
    Conj,
    DifferentIndividuals,
    Disj,
    DisjointRoles,
    DomainRestriction,
    HasValue,
    HOLiteral,
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
from .engine import CLASSICKE, KEGAMMA, BudgetExceeded, saturate
from .translate import Translator

AXIOM_SCHEMAS = ("sub", "equiv", "all", "some", "min", "max", "rsub", "requiv", "chain",
                 "Sym", "Asym", "Ref", "Irref", "Tra", "Fun", "Dis", "product", "rule")


@dataclass
class GenConfig:
    individuals: int = 4
    concepts: int = 3
    roles: int = 2
    axioms: int = 4
    assertions: int = 4
    max_n: int = 2
    depth: int = 1


class KBGenerator:
    """Seeded random knowledge bases over small signatures."""

    def __init__(self, seed=0, config: GenConfig | None = None):
        self.rng = random.Random(seed)
        self.cfg = config or GenConfig()

    def kb(self) -> KnowledgeBase:
        r, c = self.rng, self.cfg
        self.inds = [f"a{i}" for i in range(r.randint(0, c.individuals))]
        self.cons = [f"C{i}" for i in range(r.randint(1, c.concepts))]
        self.rols = [f"R{i}" for i in range(r.randint(1, c.roles))]
        stmts = [self.axiom() for _ in range(r.randint(0, c.axioms))]
        if self.inds:
            stmts += [self.assertion() for _ in range(r.randint(0, c.assertions))]
        sig = Signature(individuals=tuple(self.inds), concepts=tuple(self.cons),
                        roles=tuple(self.rols))
        return KnowledgeBase.build(stmts, sig)

    def concept(self, depth=None):
        r = self.rng
        depth = self.cfg.depth if depth is None else depth
        if depth <= 0 or r.random() < 0.55:
            x = r.random()
            if x < 0.05:
                return Top()
            if x < 0.08:
                return Bottom()
            return Concept(r.choice(self.cons))
        options = ["neg", "and", "or", "self"]
        if self.inds:
            options += ["one", "has"]
        k = r.choice(options)
        if k == "neg":
            return Neg(self.concept(depth - 1))
        if k == "and":
            return Conj(self.concept(depth - 1), self.concept(depth - 1))
        if k == "or":
            return Disj(self.concept(depth - 1), self.concept(depth - 1))
        if k == "self":
            return SelfRestriction(self.role(0))
        if k == "one":
            return Nominal(*sorted(set(r.sample(self.inds, r.randint(1, min(2, len(self.inds)))))))
        return HasValue(self.role(0), r.choice(self.inds))

    def role(self, depth=None):
        r = self.rng
        depth = self.cfg.depth if depth is None else depth
        if depth <= 0 or r.random() < 0.6:
            if r.random() < 0.04:
                return UniversalRole()
            return RoleName(r.choice(self.rols))
        k = r.choice(["inv", "neg", "and", "or", "dom", "rng", "restr", "id", "prod"])
        if k == "inv":
            return Inverse(self.role(depth - 1))
        if k == "neg":
            return Neg(self.role(depth - 1))
        if k == "and":
            return Conj(self.role(depth - 1), self.role(depth - 1))
        if k == "or":
            return Disj(self.role(depth - 1), self.role(depth - 1))
        if k == "dom":
            return DomainRestriction(self.role(depth - 1), self.concept(0))
        if k == "rng":
            return RangeRestriction(self.role(depth - 1), self.concept(0))
        if k == "restr":
            return Restriction(self.role(depth - 1), self.concept(0), self.concept(0))
        if k == "id":
            return IdentityRole(self.concept(0))
        return Product(self.concept(0), self.concept(0))

    def axiom(self):
        r = self.rng
        k = r.choice(AXIOM_SCHEMAS)
        C, R = self.concept, self.role
        if k == "sub":
            return ConceptInclusion(C(), C())
        if k == "equiv":
            return ConceptEquivalence(C(), C())
        if k == "all":
            return ConceptInclusion(C(), AllValues(R(0), C(0)))
        if k == "some":
            return ConceptInclusion(SomeValues(R(0), C(0)), C())
        if k == "min":
            return ConceptInclusion(MinCard(r.randint(1, self.cfg.max_n), R(0), C(0)), C(0))
        if k == "max":
            return ConceptInclusion(C(0), MaxCard(r.randint(1, self.cfg.max_n), R(0), C(0)))
        if k == "rsub":
            return RoleInclusion(R(), R())
        if k == "requiv":
            return RoleEquivalence(R(), R())
        if k == "chain":
            return RoleChain((R(0), R(0)), R(0))
        if k == "Dis":
            return DisjointRoles(R(), R())
        if k == "product":
            return RoleEquivalence(RoleName(r.choice(self.rols)), Product(C(0), C(0)))
        if k == "rule":
            return self.rule()
        return RoleProperty(k, R(0))

    def rule(self):
        r = self.rng
        x, y = QVar("x"), QVar("y")
        body = [HOLiteral(RoleAtom(RoleName(r.choice(self.rols)), x, y), r.random() < 0.8)]
        if r.random() < 0.5:
            body.append(HOLiteral(ConceptAtom(Concept(r.choice(self.cons)), y)))
        head = HOLiteral(ConceptAtom(Concept(r.choice(self.cons)), x)) if r.random() < 0.5 \
            else HOLiteral(RoleAtom(RoleName(r.choice(self.rols)), y, x))
        return Rule(tuple(body), (head,))

    def assertion(self):
        r = self.rng
        a, b = r.choice(self.inds), r.choice(self.inds)
        k = r.random()
        if k < 0.4:
            return ConceptAssertion(a, self.concept(0), r.random() < 0.75)
        if k < 0.8:
            return RoleAssertion(RoleName(r.choice(self.rols)), a, b, r.random() < 0.75)
        if k < 0.9:
            return SameIndividual(a, b)
        return DifferentIndividuals(a, b)


def split_family(k: int) -> KnowledgeBase:
    """One individual, axioms C_i ⊑ D_i for i = 1..k: 2^k models."""
    stmts = [ConceptInclusion(Concept(f"C{i}"), Concept(f"D{i}")) for i in range(1, k + 1)]
    stmts.append(ConceptAssertion("a", Top()))
    sig = Signature(individuals=("a",),
                    concepts=tuple(n for i in range(1, k + 1) for n in (f"C{i}", f"D{i}")))
    return KnowledgeBase.build(stmts, sig)


@dataclass
class BenchRow:
    instance: str
    mode: str
    models: int
    time_ms: float
    egamma: int
    pb: int
    peak_stored: int
    verdict: str


def run_instance(name, phi, mode, budget=10**6):
    try:
        tab = saturate(phi, mode, budget)
    except BudgetExceeded as e:
        return BenchRow(name, mode, 0, 0.0, e.applications, 0, 0, "budgetExceeded"), None
    verdict = "consistent" if tab.consistent else "inconsistent"
    return BenchRow(name, mode, len(tab.open_branches), tab.wall_ms, tab.stats.egamma,
                    tab.stats.pb, tab.stats.peak_stored, verdict), tab


def default_instances(k_max=10, random_count=20, seed=7):
    out = [(f"split-{k}", split_family(k)) for k in range(1, k_max + 1)]
    gen = KBGenerator(seed)
    for i in range(random_count):
        out.append((f"random-{seed}-{i}", gen.kb()))
    return out


def run_bench(instances, budget=10**6):
    """Rows for both modes and the kegamma speedup over classicke."""
    rows, tabs = [], {}
    for name, kb in instances:
        phi = Translator(kb).phi()
        for mode in (CLASSICKE, KEGAMMA):
            row, tab = run_instance(name, phi, mode, budget)
            rows.append(row)
            tabs[(name, mode)] = tab
    t = {m: sum(r.time_ms for r in rows if r.mode == m) for m in (CLASSICKE, KEGAMMA)}
    speedup = t[CLASSICKE] / t[KEGAMMA] if t[KEGAMMA] > 0 else float("nan")
    return rows, speedup, tabs


def format_rows(rows, speedup, timings=True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "mode", "models", "time_ms", "egamma", "pb", "peak_stored",
                "verdict"])
    for r in rows:
        w.writerow([r.instance, r.mode, r.models, f"{r.time_ms:.3f}" if timings else "-",
                    r.egamma, r.pb, r.peak_stored, r.verdict])
    buf.write(f"# speedup classicke/kegamma = {speedup:.3f}\n" if timings else "")
    return buf.getvalue()
