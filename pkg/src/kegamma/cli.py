"""Command-line entry point.

Exit codes: 0 consistent (or answers produced), 1 inconsistent, 2 input
rejected, 3 rule-application budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

from . import codec, dl
from .core import FormulaError
from .engine import DEFAULT_BUDGET, MODES, BudgetExceeded, saturate
from .hocqa import answer, default_allows, preimages
from .owlxml import OwlXmlError, parse_owlxml
from .surface import DEFAULT_POOL, parse_query
from .translate import Translator, TranslationError

EXIT_OK, EXIT_INCONSISTENT, EXIT_REJECTED, EXIT_BUDGET = 0, 1, 2, 3

OWL_SUFFIXES = (".owl", ".owx", ".xml")


class Rejected(Exception):
    pass


@dataclass
class Loaded:
    phi: object
    known: dict
    st: object = None
    notices: list = field(default_factory=list)

    def allows(self):
        return self.st.allows if self.st is not None else default_allows


@dataclass
class RunReport:
    mode: str
    open_branches: int = 0
    closed_branches: int = 0
    egamma: int = 0
    pb: int = 0
    wall_ms: float = 0.0
    peak_stored_literals: int = 0
    verdict: str = "consistent"

    @classmethod
    def of(cls, tab):
        return cls(tab.mode, len(tab.open_branches), len(tab.closed_branches),
                   tab.stats.egamma, tab.stats.pb, tab.wall_ms, tab.stats.peak_stored,
                   "consistent" if tab.consistent else "inconsistent")

    def lines(self, timings=True):
        out = [f"mode: {self.mode}", f"verdict: {self.verdict}",
               f"open_branches: {self.open_branches}",
               f"closed_branches: {self.closed_branches}",
               f"egamma_applications: {self.egamma}", f"pb_applications: {self.pb}",
               f"rule_applications: {self.egamma + self.pb}",
               f"peak_stored_literals: {self.peak_stored_literals}"]
        if timings:
            out.append(f"wall_time_ms: {self.wall_ms:.3f}")
        return out


def load(path, max_card=dl.DEFAULT_MAX_CARD) -> Loaded:
    if path.lower().endswith(OWL_SUFFIXES):
        try:
            res = parse_owlxml(path, max_card)
        except OwlXmlError as e:
            raise Rejected(str(e)) from e
        if res.diagnostics:
            raise Rejected("\n".join(str(d) for d in res.diagnostics))
        try:
            tr = Translator(res.kb)
        except TranslationError as e:
            raise Rejected(str(e)) from e
        return Loaded(tr.phi(), dict(tr.st.by_key), tr.st, res.notices)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    resolve = codec.Resolver()
    try:
        phi = codec.decode_conjunction(text, resolve)
    except FormulaError as e:
        raise Rejected(str(e)) from e
    return Loaded(phi, dict(resolve.table))


def _saturate(args, phi):
    tab = saturate(phi, args.mode, args.budget, trace=bool(args.trace), workers=args.workers)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(tab.trace) + ("\n" if tab.trace else ""))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(tab.to_dot())
    return tab


def _name(st, v):
    if st is None:
        return v.name
    t = st.term_of.get(v, v.name)
    return t if isinstance(t, str) else getattr(t, "name", str(t))


def answer_records(ans, tab, loaded):
    """One JSON-ready record per distinct solution, in a stable order."""
    st = loaded.st
    where: dict = {}
    for bid, items in ans.per_branch.items():
        for a in items:
            where.setdefault(a.key(), []).append((bid, a.sigma))
    records = []
    for key in sorted(ans.flat, key=lambda k: sorted((m.name, v.name) for m, v in k)):
        pools: dict = {}
        pre: dict = {}
        for m, v in sorted(key, key=lambda mv: mv[0].name):
            q = st.query_vars.get(m) if st is not None else None
            pool = q.pool if q is not None else DEFAULT_POOL[m.sort]
            pools.setdefault(pool, {})[m.name] = _name(st, v)
            if v.sort == 0:
                names = set()
                for _, sigma in where[key]:
                    names.update(_name(st, p) for p in preimages(sigma, tab.pool, v))
                pre[m.name] = sorted(names)
        rec = {"bindings": pools, "branches": [b for b, _ in where[key]]}
        if pre:
            rec["preimages"] = pre
        records.append(rec)
    return records


def cmd_check(args):
    loaded = load(args.kb, args.max_card)
    tab = _saturate(args, loaded.phi)
    rep = RunReport.of(tab)
    print("\n".join(rep.lines(not args.no_timings)))
    return EXIT_OK if tab.consistent else EXIT_INCONSISTENT


def cmd_query(args):
    loaded = load(args.kb, args.max_card)
    markers = (lambda q, sort: loaded.st.marker(q)) if loaded.st is not None else None
    try:
        psi = parse_query(args.query, loaded.known, markers)
    except (FormulaError, dl.KindError) as e:
        raise Rejected(str(e)) from e
    tab = _saturate(args, loaded.phi)
    rep = RunReport.of(tab)
    if not tab.consistent:
        print("\n".join(rep.lines(not args.no_timings)))
        return EXIT_INCONSISTENT
    ans = answer(psi, tab, loaded.allows())
    records = answer_records(ans, tab, loaded)
    print(f"answers: {len(records)}")
    for r in records:
        print(json.dumps(r, ensure_ascii=False, sort_keys=True))
    for bid, items in ans.per_branch.items():
        print(f"branch {bid}: {len(items)} solution(s)")
    print("\n".join(rep.lines(not args.no_timings)))
    return EXIT_OK


def cmd_translate(args):
    loaded = load(args.kb, args.max_card)
    out = codec.encode_conjunction(loaded.phi)
    sys.stdout.write(out + ("\n" if out else ""))
    return EXIT_OK


def cmd_bench(args):
    from .bench import default_instances, format_rows, run_bench
    inst = default_instances(args.k_max, args.random, args.seed)
    rows, speedup, _ = run_bench(inst, args.budget)
    sys.stdout.write(format_rows(rows, speedup, not args.no_timings))
    return EXIT_OK


def cmd_oracle_check(args):
    from .oracle import OracleError, find_model
    loaded = load(args.kb, args.max_card)
    try:
        model = find_model(loaded.phi, bound=args.bound)
    except OracleError as e:
        raise Rejected(str(e)) from e
    if model is None:
        print("oracle: inconsistent")
        return EXIT_INCONSISTENT
    print("oracle: consistent")
    print(f"domain: {list(model.domain)}")
    for v, d in sorted(model.m0.items(), key=lambda kv: kv[0].name):
        print(f"  {v} -> {d}")
    for table in (model.m1, model.m3):
        for v, s in sorted(table.items(), key=lambda kv: kv[0].name):
            print(f"  {v} = {sorted(s)}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="kegamma", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, kb=True):
        if kb:
            sp.add_argument("kb", help="OWL/XML file (.owl/.owx/.xml) or internal-coding file")
        sp.add_argument("--mode", choices=MODES, default="kegamma")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--dot")
        sp.add_argument("--trace")
        sp.add_argument("--max-card", type=int, default=dl.DEFAULT_MAX_CARD)
        sp.add_argument("--no-timings", action="store_true",
                        help="omit wall-clock fields for byte-stable output")

    sp = sub.add_parser("check", help="decide consistency")
    common(sp)
    sp.set_defaults(func=cmd_check)
    sp = sub.add_parser("query", help="answer a higher-order conjunctive query")
    common(sp)
    sp.add_argument("query")
    sp.set_defaults(func=cmd_query)
    sp = sub.add_parser("translate", help="print the clausal translation")
    common(sp)
    sp.set_defaults(func=cmd_translate)
    sp = sub.add_parser("bench", help="compare kegamma and classicke")
    common(sp, kb=False)
    sp.add_argument("--k-max", type=int, default=10)
    sp.add_argument("--random", type=int, default=20)
    sp.add_argument("--seed", type=int, default=7)
    sp.set_defaults(func=cmd_bench)
    sp = sub.add_parser("oracle-check", help="brute-force model search")
    common(sp)
    sp.add_argument("--bound", type=int, default=6)
    sp.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except Rejected as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    except BudgetExceeded as e:
        print("verdict: budgetExceeded")
        print(str(e), file=sys.stderr)
        return EXIT_BUDGET
    except OSError as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
