"""KE^γ saturation of clausal conjunctions and per-branch equality rewriting.

A branch is processed in one left-to-right sweep over (clause, τ) pairs.
For each pair either some disjunct instance is already on the branch, or
the E^γ rule adds the single disjunct whose complement is missing, or PB
splits on the complement of the first such disjunct.  Branch literal sets
only grow, so a pair that is fulfilled stays fulfilled and both children of
a split resume at the same pair.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core import (
    FREE,
    Clause,
    Conjunction,
    Eq,
    Literal,
    Var,
    apply_subst,
    complement,
    compose,
)

log = logging.getLogger(__name__)

KEGAMMA = "kegamma"
CLASSICKE = "classicke"
MODES = (KEGAMMA, CLASSICKE)

DEFAULT_BUDGET = 1_000_000

OPEN = "open"
CLOSED = "closed"

WITNESS = Var(0, "_w0", FREE, 1 << 30)


class BudgetExceeded(RuntimeError):
    def __init__(self, applications):
        super().__init__(f"budget exceeded after {applications} rule applications")
        self.applications = applications


def individual_pool(phi: Conjunction) -> list[Var]:
    """Var0(φ) in <_{x0} order; a lone witness when φ names no individual."""
    pool = phi.free_vars(0)
    return pool or [WITNESS]


def substitution_space(clause: Clause, pool):
    """All maps from the clause's quantified variables into ``pool``, in
    lexicographic order of the targets' positions."""
    for targets in itertools.product(pool, repeat=len(clause.qvars)):
        yield dict(zip(clause.qvars, targets))


def _reflexive(lit: Literal) -> bool:
    a = lit.atom
    return isinstance(a, Eq) and a.left == a.right


def is_true_literal(lit: Literal) -> bool:
    return lit.positive and _reflexive(lit)


def is_false_literal(lit: Literal) -> bool:
    return not lit.positive and _reflexive(lit)


def instance(clause: Clause, tau) -> tuple[Literal, ...]:
    return tuple(dict.fromkeys(clause.instantiate(tau)))


def is_closed(literals) -> bool:
    seen = set(literals)
    return any(complement(l) in seen or is_false_literal(l) for l in seen)


def egamma_step(literals, clause: Clause, tau, i: int) -> list:
    """E^γ: with every β̄_jτ (j ≠ i) on the branch, add β_iτ."""
    inst = clause.instantiate(tau)
    seen = set(literals)
    target = inst[i]
    for j, b in enumerate(inst):
        if j != i and b != target:
            assert complement(b) in seen or is_false_literal(b), f"{complement(b)} not on branch"
    assert target not in seen, f"{target} already on branch"
    return list(literals) + [target]


def pb_step(literals, a: Literal):
    """PB on ``a``: the left child gets ``a``'s complement (the disjunct that
    fulfils the clause), the right child gets ``a`` itself."""
    seen = set(literals)
    assert a not in seen and complement(a) not in seen, "PB literal already decided"
    return list(literals) + [complement(a)], list(literals) + [a]


def _tau_str(clause, tau):
    return "(" + ",".join(tau[v].name for v in clause.qvars) + ")"


@dataclass
class Node:
    id: str
    rule: str
    added: list = field(default_factory=list)
    children: list = field(default_factory=list)
    status: str = OPEN

    @property
    def key(self):
        return tuple(int(p) for p in self.id.split("."))


@dataclass
class Branch:
    """A leaf of the tableau together with its rewritten form."""

    id: str
    literals: tuple
    status: str
    sigma: dict = field(default_factory=dict)
    normalized: tuple = ()

    @property
    def is_open(self):
        return self.status == OPEN

    def literal_set(self):
        return frozenset(self.literals)


@dataclass
class Stats:
    egamma: int = 0
    pb: int = 0
    peak_stored: int = 0
    expansion_literals: int = 0

    @property
    def applications(self):
        return self.egamma + self.pb


@dataclass
class Tableau:
    phi: Conjunction
    mode: str
    root: Node
    branches: list
    stats: Stats
    pool: list
    trace: list = field(default_factory=list)
    wall_ms: float = 0.0

    @property
    def open_branches(self) -> list[Branch]:
        return [b for b in self.branches if b.is_open]

    @property
    def closed_branches(self) -> list[Branch]:
        return [b for b in self.branches if not b.is_open]

    @property
    def consistent(self) -> bool:
        return bool(self.open_branches)

    def E(self):
        return [(b, b.sigma) for b in self.open_branches]

    def open_literal_sets(self):
        return sorted((frozenset(b.literals) for b in self.open_branches),
                      key=lambda s: sorted(map(str, s)))

    def to_dot(self) -> str:
        return to_dot(self)


class _State:
    """Mutable per-branch work item."""

    __slots__ = ("node", "lits", "seen", "ci", "ti")

    def __init__(self, node, lits, seen, ci=0, ti=0):
        self.node = node
        self.lits = lits
        self.seen = seen
        self.ci = ci
        self.ti = ti

    def closed_by(self, lit):
        return complement(lit) in self.seen or is_false_literal(lit)

    def add(self, lit):
        if lit in self.seen:
            return False
        self.lits.append(lit)
        self.seen.add(lit)
        self.node.added.append(lit)
        return self.closed_by(lit)

    def fork(self, node):
        return _State(node, list(self.lits), set(self.seen), self.ci, self.ti)


class _Saturator:
    def __init__(self, phi, mode, budget, trace, pool=None):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.phi = phi
        self.mode = mode
        self.budget = budget
        self.trace_on = trace
        self.trace = []
        self.stats = Stats()
        self.pool = pool if pool is not None else individual_pool(phi)
        self.clauses = phi.clauses
        self.spaces = [len(self.pool) ** len(c.qvars) for c in self.clauses]
        self.expanded = None
        if mode == CLASSICKE:
            # γ-instances are generated once and kept for the whole run.
            self.expanded = [[instance(c, tau) for tau in substitution_space(c, self.pool)]
                             for c in self.clauses]
            self.stats.expansion_literals = sum(len(i) for inst in self.expanded for i in inst)

    def _instance(self, ci, ti):
        if self.expanded is not None:
            return self.expanded[ci][ti]
        return instance(self.clauses[ci], self._tau(ci, ti))

    def _tick(self):
        if self.stats.applications >= self.budget:
            raise BudgetExceeded(self.stats.applications)

    def _log(self, rule, st, ci, ti, lit):
        if self.trace_on:
            c = self.clauses[ci]
            tau = _tau_str(c, self._tau(ci, ti))
            self.trace.append(f"{rule}\tbranch={st.node.id}\tclause={ci}\ttau={tau}\tliteral={lit}")

    def _tau(self, ci, ti):
        c = self.clauses[ci]
        k = len(self.pool)
        targets = []
        for _ in c.qvars:
            targets.append(self.pool[ti % k])
            ti //= k
        return dict(zip(c.qvars, reversed(targets)))

    def root_state(self):
        root = Node("1", "root")
        st = _State(root, [], set())
        closed = False
        for lit in self.phi.literals:
            closed = st.add(lit) or closed
        root.added = list(st.lits)
        if closed:
            root.status = CLOSED
        return root, st

    def run(self, st: _State, live: int = 0):
        """Saturate the subtree below ``st``; returns its finished leaves."""
        leaves = []
        stack = [st]
        while stack:
            st = stack.pop()
            self._peak(stack, st, live)
            if st.node.status == CLOSED:
                leaves.append(st)
                continue
            split = self._sweep(st)
            self._peak(stack, st, live)
            if split is None:
                leaves.append(st)
            else:
                left, right = split
                stack.append(right)
                stack.append(left)
        return leaves

    def _peak(self, stack, st, live):
        stored = live + len(st.lits) + sum(len(s.lits) for s in stack)
        stored += self.stats.expansion_literals
        if stored > self.stats.peak_stored:
            self.stats.peak_stored = stored

    def _sweep(self, st: _State):
        """Advance ``st`` until it is fulfilled, closed, or needs a split."""
        seen = st.seen
        while st.ci < len(self.clauses):
            n = self.spaces[st.ci]
            while st.ti < n:
                inst = self._instance(st.ci, st.ti)
                if any(l in seen or is_true_literal(l) for l in inst):
                    st.ti += 1
                    continue
                missing = [l for l in inst if complement(l) not in seen and not is_false_literal(l)]
                self._tick()
                if len(missing) <= 1:
                    lit = missing[0] if missing else inst[0]
                    self.stats.egamma += 1
                    self._log("E", st, st.ci, st.ti, lit)
                    if st.add(lit):
                        st.node.status = CLOSED
                        return None
                    st.ti += 1
                    continue
                lit = missing[0]
                self.stats.pb += 1
                self._log("PB", st, st.ci, st.ti, complement(lit))
                return self._split(st, lit)
            st.ci += 1
            st.ti = 0
        return None

    def _split(self, st, lit):
        node = st.node
        lnode = Node(node.id + ".1", "PB")
        rnode = Node(node.id + ".2", "PB")
        node.children = [lnode, rnode]
        left, right = st.fork(lnode), st.fork(rnode)
        if left.add(lit):
            lnode.status = CLOSED
        if right.add(complement(lit)):
            rnode.status = CLOSED
        return left, right


def _subtree_job(args):
    phi, mode, budget, pool, st_data = args
    sat = _Saturator(phi, mode, budget, False, pool)
    node_id, lits, ci, ti = st_data
    node = Node(node_id, "PB")
    st = _State(node, list(lits), set(lits), ci, ti)
    leaves = sat.run(st)
    return node, [(s.node.id, tuple(s.lits), s.node.status) for s in leaves], sat.stats


def saturate(phi: Conjunction, mode: str = KEGAMMA, budget: int = DEFAULT_BUDGET,
             trace: bool = False, workers: int = 1) -> Tableau:
    """Build a fulfilled KE^γ-tableau for ``phi`` and normalize its open branches.

    Raises :class:`BudgetExceeded` when more than ``budget`` rule applications
    would be needed.
    """
    t0 = time.perf_counter()
    if not phi.free_vars(0) and phi.clauses:
        log.warning("no individuals: instantiating over a single witness")
    sat = _Saturator(phi, mode, budget, trace)
    root, st = sat.root_state()
    if workers > 1:
        leaves = _parallel(sat, st, workers)
    else:
        leaves = [(s.node.id, tuple(s.lits), s.node.status) for s in sat.run(st)]
    branches = []
    for bid, lits, status in sorted(leaves, key=lambda x: _dewey(x[0])):
        b = Branch(bid, lits, status)
        if status == OPEN:
            normalize_branch(b, sat.pool)
        branches.append(b)
    tab = Tableau(phi, mode, root, branches, sat.stats, sat.pool, sat.trace)
    tab.wall_ms = (time.perf_counter() - t0) * 1000
    return tab


def _dewey(s):
    return tuple(int(p) for p in s.split("."))


def _parallel(sat, st, workers):
    # Grow the frontier sequentially, then hand whole subtrees to workers.
    frontier = [st]
    done = []
    while frontier and len(frontier) < 2 * workers:
        cur = frontier.pop(0)
        if cur.node.status == CLOSED:
            done.append(cur)
            continue
        split = sat._sweep(cur)
        sat._peak(frontier, cur, 0)
        if split is None:
            done.append(cur)
        else:
            frontier.extend(split)
    out = [(s.node.id, tuple(s.lits), s.node.status) for s in done]
    if not frontier:
        return out
    remaining = sat.budget - sat.stats.applications
    jobs = [(sat.phi, sat.mode, remaining, sat.pool,
             (s.node.id, tuple(s.lits), s.ci, s.ti)) for s in frontier]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_subtree_job, jobs))
    for s, (node, leaves, stats) in zip(frontier, results):
        s.node.children = node.children
        s.node.added.extend(node.added)
        s.node.status = node.status
        sat.stats.egamma += stats.egamma
        sat.stats.pb += stats.pb
        sat.stats.peak_stored = max(sat.stats.peak_stored, stats.peak_stored)
        out.extend(leaves)
    if sat.stats.applications > sat.budget:
        raise BudgetExceeded(sat.stats.applications)
    return out


def normalize_equalities(literals, pool):
    """Collapse equality classes to their <_{x0}-least member.

    Returns ``(rewritten literals, σ_θ, closed)``.
    """
    rank = {v: i for i, v in enumerate(pool)}
    key = lambda v: (rank.get(v, len(rank)), v.ordinal, v.name)
    lits = list(dict.fromkeys(literals))
    sigma: dict = {}
    while True:
        pair = next((l.atom for l in lits
                     if l.positive and isinstance(l.atom, Eq) and l.atom.left != l.atom.right),
                    None)
        if pair is None:
            break
        x, y = pair.left, pair.right
        z = min(x, y, key=key)
        step = {v: z for v in (x, y) if v != z}
        sigma = compose(sigma, step)
        lits = list(dict.fromkeys(apply_subst(l, step) for l in lits))
    seen = set(lits)
    closed = any(complement(l) in seen or is_false_literal(l) for l in lits)
    return tuple(lits), sigma, closed


def normalize_branch(b: Branch, pool):
    lits, sigma, closed = normalize_equalities(b.literals, pool)
    b.sigma = sigma
    b.normalized = lits
    if closed:
        b.status = CLOSED
    return b


def representatives(b: Branch, pool):
    return [v for v in pool if b.sigma.get(v, v) == v]


def is_fulfilled(phi: Conjunction, literals, pool=None) -> bool:
    """Every clause instance over the pool has a disjunct among ``literals``."""
    pool = pool if pool is not None else individual_pool(phi)
    seen = set(literals)
    for c in phi.clauses:
        for tau in substitution_space(c, pool):
            if not any(l in seen or is_true_literal(l) for l in c.instantiate(tau)):
                return False
    return True


def to_dot(tab: Tableau) -> str:
    lines = ["digraph tableau {", '  node [shape=box, fontname="monospace"];']
    status = {b.id: b.status for b in tab.branches}

    def esc(s):
        return s.replace("\\", "\\\\").replace('"', '\\"')

    stack = [tab.root]
    while stack:
        n = stack.pop()
        body = "\\n".join(esc(str(l)) for l in n.added) or " "
        mark = ""
        if not n.children:
            mark = "\\n×" if status.get(n.id, n.status) == CLOSED else "\\n○"
        lines.append(f'  "{n.id}" [label="{n.id}\\n{body}{mark}"];')
        for c in n.children:
            lines.append(f'  "{n.id}" -> "{c.id}";')
        stack.extend(reversed(n.children))
    lines.append("}")
    return "\n".join(lines) + "\n"
