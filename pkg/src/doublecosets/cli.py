"""Command-line front end.

    doublecosets classify C4 C2*C2 P1
    doublecosets classify D4 "A1[gl]*A1[gl]*T2" P4 --oracle 2,3 --output json
    doublecosets witness C4 C1*C1*C1*C1 P4 --strategy lemma
    doublecosets oracle C2 C1*C1 P1 --oracle 2,3,5
    doublecosets sweep 3
    doublecosets tables
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import shlex
import sys
from dataclasses import dataclass, field

from .criterion import STRATEGIES, _ALIASES, CriterionReport, analyse, groups_up_to
from .fforacle.field import UnsupportedField
from .fforacle.flags import Budget, DEFAULT_BUDGET
from .fforacle.orbits import Evidence, stabilization_test
from .rootsys import RootSystem
from .subgroups import (
    ParabolicSpec,
    SpecError,
    SubgroupSpec,
    Verdict,
    classify_finiteness,
    enumerate_maximal_rank_subgroups,
    maximal_parabolics,
    parse_group,
    parse_parabolic,
    parse_subgroup,
    subgroup_sort_key,
)
from .tables import render_tables

COMMANDS = ("classify", "witness", "oracle")
OUTPUTS = ("text", "json", "csv")


@dataclass
class Query:
    command: str
    group: RootSystem
    subgroup: SubgroupSpec
    parabolic: ParabolicSpec
    q_list: list[int] = field(default_factory=list)
    strategy: str = "b2a3"
    output: str = "text"

    def format(self) -> str:
        return f"{self.command} {self.group.name} {self.subgroup.label()} {self.parabolic.label()}"


class QueryError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (token {position})")
        self.position = position


def parse_q_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        qs = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise SpecError(f"bad prime list {text!r}") from exc
    if qs != sorted(set(qs)):
        raise SpecError("prime list must be strictly ascending")
    return qs


def parse_budget(text: str | None) -> Budget:
    if not text:
        return DEFAULT_BUDGET
    try:
        flags, seconds = text.split(",")
        return Budget(int(flags), float(seconds))
    except ValueError as exc:
        raise SpecError(f"budget must be <flags>,<seconds>, got {text!r}") from exc


def _strategy(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in STRATEGIES:
        raise SpecError(f"unknown strategy {name!r}")
    return name


def build_query(command: str, group: str, subgroup: str, parabolic: str, q_list=(),
                strategy: str = "b2a3", output: str = "text") -> Query:
    if command not in COMMANDS:
        raise QueryError(f"unknown command {command!r}", 0)
    try:
        G = parse_group(group)
    except SpecError as exc:
        raise QueryError(str(exc), 1) from exc
    try:
        X = parse_subgroup(G, subgroup)
    except SpecError as exc:
        raise QueryError(str(exc), 2) from exc
    try:
        P = parse_parabolic(G, parabolic)
    except SpecError as exc:
        raise QueryError(str(exc), 3) from exc
    if output not in OUTPUTS:
        raise QueryError(f"unknown output {output!r}", 4)
    return Query(command, G, X, P, list(q_list), _strategy(strategy), output)


def parse_query(text: str) -> Query:
    """Parse `<command> <FAMILY><rank> <factors> <P...>`."""
    toks = shlex.split(text)
    if len(toks) != 4:
        raise QueryError(f"expected 4 tokens, got {len(toks)}", min(len(toks), 4))
    return build_query(*toks)


# -- single queries ---------------------------------------------------------------


def run_classify(query: Query, with_criterion: bool = False, budget: Budget = DEFAULT_BUDGET) -> dict:
    G, X, P = query.group, query.subgroup, query.parabolic
    v = classify_finiteness(G, X, P)
    out = {"group": G.name, "subgroup": X.label(), "parabolic": P.label(),
           "verdict": v.value, "provenance": v.provenance}
    if with_criterion:
        out["criterion"] = analyse(G, X, P, query.strategy).to_json()
    if query.q_list:
        out["oracle"] = stabilization_test(G, X, P, query.q_list, budget).to_json()
    return out


def run_witness(query: Query) -> dict:
    rep = analyse(query.group, query.subgroup, query.parabolic, query.strategy)
    return {"group": query.group.name, "subgroup": query.subgroup.label(),
            "parabolic": query.parabolic.label(), **rep.to_json()}


def run_oracle(query: Query, budget: Budget = DEFAULT_BUDGET) -> dict:
    ev = stabilization_test(query.group, query.subgroup, query.parabolic, query.q_list or [2, 3], budget)
    return {"group": query.group.name, "subgroup": query.subgroup.label(),
            "parabolic": query.parabolic.label(), **ev.to_json()}


# -- sweeps -------------------------------------------------------------------------


@dataclass
class SweepRow:
    group: str
    subgroup: str
    parabolic: str
    verdict: Verdict
    criterion: CriterionReport
    oracle: Evidence | None

    @property
    def agreement(self) -> bool:
        return consistent(self.verdict, self.criterion, self.oracle)

    def to_json(self) -> dict:
        return {
            "group": self.group, "subgroup": self.subgroup, "parabolic": self.parabolic,
            "verdict": self.verdict.value, "provenance": self.verdict.provenance,
            "criterion": self.criterion.verdict,
            "oracle": self.oracle.verdict if self.oracle else None,
            "counts": self.oracle.counts if self.oracle else None,
            "agreement": self.agreement,
        }


def consistent(v: Verdict, crit: CriterionReport, ev: Evidence | None) -> bool:
    """Criterion silence is consistent with Finite; oracle Inconclusive with either."""
    if v.finite:
        ok = crit.verdict == "NoWitnessFound"
        return ok and (ev is None or ev.verdict != "Growing")
    ok = crit.verdict in ("InfiniteWitnessed", "PrefilteredInfinite")
    return ok and (ev is None or ev.verdict != "Bounded")


@dataclass
class SweepReport:
    rank_bound: int
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def disagreements(self) -> list[SweepRow]:
        return [r for r in self.rows if not r.agreement]

    def summary(self) -> dict:
        return {"rank_bound": self.rank_bound, "rows": len(self.rows),
                "finite": sum(r.verdict.finite for r in self.rows),
                "agreements": len(self.rows) - len(self.disagreements),
                "disagreements": len(self.disagreements)}

    def to_json(self) -> dict:
        return {"summary": self.summary(), "rows": [r.to_json() for r in self.rows]}


def run_sweep(rank_bound: int, with_oracle: bool = False, budget: Budget = DEFAULT_BUDGET,
              q_list=(2, 3, 5), strategy: str = "b2a3") -> SweepReport:
    if rank_bound > 8 or (with_oracle and rank_bound > 4):
        raise SpecError("rank bound must be <= 8, or <= 4 with the oracle")
    report = SweepReport(rank_bound)
    for G in groups_up_to(rank_bound):
        subs = sorted((X for X, _ in enumerate_maximal_rank_subgroups(G)), key=subgroup_sort_key)
        for X in subs:
            for P in maximal_parabolics(G):
                v = classify_finiteness(G, X, P)
                crit = analyse(G, X, P, strategy)
                ev = stabilization_test(G, X, P, list(q_list), budget) if with_oracle else None
                report.rows.append(SweepRow(G.name, X.label(), P.label(), v, crit, ev))
    return report


# -- rendering -----------------------------------------------------------------------


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        payload = records[0] if len(records) == 1 else records
        return json.dumps(payload, indent=2, sort_keys=True)
    flat = [_flatten(r) for r in records]
    if fmt == "csv":
        cols = []
        for r in flat:
            cols += [k for k in r if k not in cols]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue().rstrip("\n")
    return "\n".join("  ".join(f"{k}={v}" for k, v in r.items()) for r in flat)


# -- entry point ------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="doublecosets", description="Finiteness of X\\G/P.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=OUTPUTS, default="text")
    common.add_argument("--strategy", default="b2a3", help="lemma | b2a3 | full")
    common.add_argument("--oracle", metavar="q,...", help="primes for finite-field orbit counts")
    common.add_argument("--budget", metavar="flags,seconds", help="per-count oracle budget")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("group")
        p.add_argument("subgroup")
        p.add_argument("parabolic")
        if name == "classify":
            p.add_argument("--criterion", action="store_true", help="append the criterion report")
    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("rank_bound", type=int)
    sub.add_parser("tables", parents=[common])
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        budget = parse_budget(args.budget)
        q_list = parse_q_list(args.oracle)
        if args.command == "tables":
            print(render(render_tables(), args.output))
            return 0
        if args.command == "sweep":
            rep = run_sweep(args.rank_bound, bool(q_list), budget, q_list or (2, 3, 5), _strategy(args.strategy))
            if args.output == "json":
                print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
            else:
                if rep.rows:
                    print(render([r.to_json() for r in rep.rows], args.output))
                print(render([rep.summary()], "text"), file=sys.stderr)
            return 0 if not rep.disagreements else 1
        query = build_query(args.command, args.group, args.subgroup, args.parabolic,
                            q_list, args.strategy, args.output)
        if args.command == "classify":
            rec = run_classify(query, args.criterion, budget)
        elif args.command == "witness":
            rec = run_witness(query)
        else:
            rec = run_oracle(query, budget)
        print(render([rec], args.output))
        return 0
    except (SpecError, QueryError, UnsupportedField) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
