"""Higher-order conjunctive query answering over normalized open branches."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Eq, Literal, Var, apply_subst, eq
from .engine import WITNESS, Branch, Tableau, representatives


def default_allows(marker: Var, target: Var) -> bool:
    return target != WITNESS


def _resolve(q: Literal, binding) -> Literal:
    return apply_subst(q, binding) if binding else q


def match_literal(q: Literal, literals, allows=default_allows, reps=()):
    """All ``(ρ, t)`` with ``t`` among ``literals`` and ``t = qρ``.

    ``q`` may contain query markers; ``ρ`` binds each of them.  A positive
    equality also matches the implicit ``x = x`` of every representative in
    ``reps``.
    """
    out = []
    seen = set()
    cands = list(literals)
    if q.positive and isinstance(q.atom, Eq):
        cands += [eq(r, r) for r in reps]
    for t in cands:
        if t.positive != q.positive or type(t.atom) is not type(q.atom):
            continue
        rho: dict = {}
        ok = True
        for a, b in zip(q.atom.args, t.atom.args):
            if a.is_query:
                prev = rho.get(a)
                if prev is None:
                    if not allows(a, b):
                        ok = False
                        break
                    rho[a] = b
                elif prev != b:
                    ok = False
                    break
            elif a != b:
                ok = False
                break
        if ok:
            key = frozenset(rho.items())
            if key not in seen:
                seen.add(key)
                out.append((rho, t))
    return out


@dataclass
class Answer:
    binding: dict          # marker -> representative
    sigma: dict            # σ_θ of the source branch
    branch: str

    def key(self):
        return frozenset(self.binding.items())


@dataclass
class AnswerSet:
    per_branch: dict = field(default_factory=dict)   # branch id -> [Answer]
    flat: set = field(default_factory=set)           # frozensets of (marker, var)

    def bindings(self):
        return [dict(k) for k in sorted(self.flat, key=_sort_key)]

    @property
    def contributing(self):
        return [b for b, ans in self.per_branch.items() if ans]


def _sort_key(k):
    return sorted((m.name, v.name) for m, v in k)


def answer_branch(psi, b: Branch, pool, allows=default_allows) -> list[Answer]:
    """Depth-first search of the query's matches on one branch."""
    query = [apply_subst(l, b.sigma) for l in psi] if b.sigma else list(psi)
    lits = b.normalized or b.literals
    reps = representatives(b, pool)
    out, seen = [], set()
    stack = [({}, 0)]
    while stack:
        rho, i = stack.pop()
        if i == len(query):
            a = Answer(dict(rho), dict(b.sigma), b.id)
            if a.key() not in seen:
                seen.add(a.key())
                out.append(a)
            continue
        q = _resolve(query[i], rho)
        ext = match_literal(q, lits, allows, reps)
        for r, _ in reversed(ext):
            stack.append(({**rho, **r}, i + 1))
    return out


def answer(psi, tab: Tableau, allows=default_allows) -> AnswerSet:
    res = AnswerSet()
    for b in tab.open_branches:
        ans = answer_branch(psi, b, tab.pool, allows)
        res.per_branch[b.id] = ans
        res.flat.update(a.key() for a in ans)
    return res


def preimages(sigma: dict, pool, rep: Var) -> list[Var]:
    """Original names collapsed onto ``rep``."""
    return [v for v in pool if sigma.get(v, v) == rep]
