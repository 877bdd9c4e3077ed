"""Command line entry point: ``cubictsp <subcommand> ...``.

Exit codes: 0 ok, 1 bound or audit violation, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .barnette import barnette_tour, tour_length_bound
from .config import BenchConfig, InstanceSpec
from .cover import audit_contributions
from .general import solve_general, solve_two_connected, subtour_lower_bound
from .graph import (Graph, GraphError, format_edge_list, format_tour, is_bridgeless, parse_tour,
                    read_edge_list, tour_problems, write_edge_list)
from .matching import decompose_third, verify_distribution
from .oracle import HELD_KARP_MAX_N, format_rotation, generate, held_karp_opt, parse_rotation
from .reducer import reduce_fully

OK, VIOLATION, INVALID = 0, 1, 2


def fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _emit(args, payload: dict, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _write_tour(args, graph: Graph, tour) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(format_tour(graph, tour))


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    graph = read_edge_list(args.graph)
    sol = solve_two_connected(graph)
    bound = sol.bound
    bound_ok = sol.tour.length <= math.floor(bound)
    audit_ok, audit = True, []
    if args.audit:
        if sol.cover.runs:
            report = audit_contributions(sol.reduced, sol.cover.runs)
            audit += report.violations
        audit += sol.lift_violations()
        audit_ok = not audit
    kinds = [r.kind for r in sol.trace]
    payload = {
        "n": graph.n, "length": sol.tour.length, "bound": fmt(bound), "bound_ok": bound_ok,
        "tour": [[e, k] for e, k in sol.tour.counts], "reductions": kinds,
        "reduced_n": sol.reduced.n, "method": sol.cover.method,
        "phase_counts": sol.cover.phase_counts(),
        "contribution_total": fmt(sol.cover.ledger.total()),
        "lift_increments": [i.increment for i in sol.lifts],
        "audit_ok": audit_ok, "audit_violations": audit,
    }
    lines = [f"length {sol.tour.length}", f"bound {fmt(bound)} ({'ok' if bound_ok else 'VIOLATED'})",
             f"reductions {' '.join(kinds) or '-'} (reduced n = {sol.reduced.n})",
             f"phases {sol.cover.phase_counts()}",
             f"contribution total {fmt(sol.cover.ledger.total())}"]
    if args.audit:
        lines.append("audit ok" if audit_ok else "audit FAILED:\n  " + "\n  ".join(audit))
    _emit(args, payload, lines)
    _write_tour(args, graph, sol.tour)
    return OK if bound_ok and audit_ok else VIOLATION


def cmd_solve_general(args) -> int:
    graph = read_edge_list(args.graph)
    sol = solve_general(graph, args.plugin_a)
    bound = sol.b_bound
    bound_ok = sol.tour.length <= math.floor(bound)
    d = sol.decomposition
    payload = {
        "n": graph.n, "b": d.b, "n0": d.n0, "length": sol.tour.length, "bound": fmt(bound),
        "bound_ok": bound_ok, "lower_bound": sol.lower_bound, "ratio": fmt(sol.ratio),
        "methods": [p.method for p in sol.parts], "tour": [[e, k] for e, k in sol.tour.counts],
    }
    lines = [f"length {sol.tour.length}", f"bridges {d.b}, singletons {d.n0}",
             f"lower bound {sol.lower_bound}, ratio {fmt(sol.ratio)}",
             f"bound {fmt(bound)} ({'ok' if bound_ok else 'VIOLATED'})"]
    _emit(args, payload, lines)
    _write_tour(args, graph, sol.tour)
    return OK if bound_ok else VIOLATION


def cmd_barnette(args) -> int:
    graph = read_edge_list(args.graph)
    with open(args.rotation) as fh:
        rotation = parse_rotation(fh.read())
    res = barnette_tour(graph, rotation)
    cycle_cap = Fraction(5 * graph.n + 14, 36)
    bound = tour_length_bound(graph.n)
    bound_ok = res.cycles <= cycle_cap and res.tour.length <= bound
    audit_ok = res.audit.ok if args.audit else True
    payload = {
        "n": graph.n, "cycles": res.cycles, "cycle_bound": fmt(cycle_cap), "length": res.tour.length,
        "bound": fmt(bound), "bound_ok": bound_ok, "counts": res.audit.counts,
        "audit_ok": audit_ok, "audit_violations": res.audit.violations,
        "tour": [[e, k] for e, k in res.tour.counts],
    }
    lines = [f"cycles {res.cycles} (bound {fmt(cycle_cap)})", f"length {res.tour.length} (bound {fmt(bound)})",
             f"per-colour cycle counts {res.audit.counts}"]
    if args.audit:
        lines.append("audit ok" if audit_ok else "audit FAILED:\n  " + "\n  ".join(res.audit.violations))
    _emit(args, payload, lines)
    _write_tour(args, graph, res.tour)
    return OK if bound_ok and audit_ok else VIOLATION


def cmd_reduce(args) -> int:
    graph = read_edge_list(args.graph)
    reduced, trace = reduce_fully(graph)
    if args.emit_trace:
        with open(args.emit_trace, "w") as fh:
            json.dump([r.to_json() for r in trace], fh, indent=1)
    if args.out:
        write_edge_list(reduced, args.out)
    print(f"{len(trace)} reductions: {' '.join(r.kind for r in trace) or '-'}; n {graph.n} -> {reduced.n}")
    return OK


def cmd_decompose(args) -> int:
    graph = read_edge_list(args.graph)
    dist = decompose_third(graph)
    report = verify_distribution(graph, dist)
    text = json.dumps(dist.to_json(), indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"{dist.k} matchings, verified: {report.ok}", file=sys.stderr)
    for p in report.problems:
        print("  " + p, file=sys.stderr)
    return OK if report.ok else VIOLATION


def cmd_verify(args) -> int:
    graph = read_edge_list(args.graph)
    with open(args.tour) as fh:
        tour = parse_tour(graph, fh.read())
    problems = tour_problems(graph, tour.as_dict())
    if problems:
        print("invalid tour:\n  " + "\n  ".join(problems))
        return VIOLATION
    print(f"valid tour of length {tour.length}")
    return OK


def cmd_oracle(args) -> int:
    graph = read_edge_list(args.graph)
    print(held_karp_opt(graph))
    return OK


def cmd_gen(args) -> int:
    params = {k: v for k, v in (("n", args.n), ("k", args.k), ("b", args.b), ("rule", args.rule)) if v is not None}
    inst = generate(args.kind, args.seed, **params)
    text = format_edge_list(inst.graph)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.rot:
        if inst.rotation is None:
            print(f"{args.kind} has no rotation system", file=sys.stderr)
            return INVALID
        with open(args.rot, "w") as fh:
            fh.write(format_rotation(inst.rotation))
    return OK


# ---------------------------------------------------------------------------
# bench


@dataclass
class RunReport:
    id: str
    kind: str
    n: int
    m: int
    b: int
    n0: int
    solver: str
    length: int
    bound: Fraction
    lower_bound: int
    opt: int | None
    reductions: int
    phases: dict[str, int] = field(default_factory=dict)
    audit_ok: bool = True
    notes: str = ""

    @property
    def bound_ok(self) -> bool:
        return self.length <= math.floor(self.bound)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.length, max(self.lower_bound, 1))

    def row(self) -> dict:
        return {
            "id": self.id, "kind": self.kind, "n": self.n, "m": self.m, "b": self.b, "n0": self.n0,
            "solver": self.solver, "length": self.length, "bound": fmt(self.bound),
            "bound_ok": int(self.bound_ok), "lower_bound": self.lower_bound,
            "opt": "" if self.opt is None else self.opt, "ratio": fmt(self.ratio),
            "opt_ratio": "" if self.opt is None else fmt(Fraction(self.length, self.opt)),
            "reductions": self.reductions,
            **{f"phase_{k}": self.phases.get(k, "") for k in ("initial", "U1", "U2", "U3")},
            "audit_ok": int(self.audit_ok), "notes": self.notes,
        }


FIELDS = list(RunReport("", "", 0, 0, 0, 0, "", 0, Fraction(0), 0, None, 0).row())


def _load(spec: InstanceSpec) -> tuple[str, Graph, dict | None]:
    if spec.file:
        graph = read_edge_list(spec.file)
        rotation = None
        if spec.rotation:
            with open(spec.rotation) as fh:
                rotation = parse_rotation(fh.read())
        return spec.name or spec.file, graph, rotation
    inst = generate(spec.kind, spec.seed, **spec.params)
    return spec.name or inst.name, inst.graph, inst.rotation


def run_instance(spec: InstanceSpec, cfg: BenchConfig) -> RunReport:
    name, graph, rotation = _load(spec)
    solver = cfg.solver
    if solver == "auto":
        if rotation is not None and nx.is_bipartite(nx.MultiGraph(graph.pairs())):
            solver = "barnette"
        elif is_bridgeless(graph):
            solver = "two_connected"
        else:
            solver = "general"
    opt = held_karp_opt(graph) if graph.n <= min(cfg.opt_max_n, HELD_KARP_MAX_N) else None
    kind = spec.kind or "file"
    if solver == "barnette":
        res = barnette_tour(graph, rotation)
        ok = res.audit.ok and res.cycles <= Fraction(5 * graph.n + 14, 36)
        return RunReport(name, kind, graph.n, graph.m, 0, 0, solver, res.tour.length,
                         tour_length_bound(graph.n), graph.n, opt, 0, {"initial": res.cycles}, ok,
                         "; ".join(res.audit.violations))
    if solver == "two_connected":
        sol = solve_two_connected(graph)
        problems = sol.lift_violations()
        if sol.cover.runs:
            problems += audit_contributions(sol.reduced, sol.cover.runs).violations
        return RunReport(name, kind, graph.n, graph.m, 0, 0, solver, sol.tour.length, sol.bound,
                         subtour_lower_bound(graph), opt, len(sol.trace), sol.cover.phase_counts(),
                         not problems, "; ".join(problems))
    if solver == "general":
        sol = solve_general(graph)
        problems = []
        for part in sol.parts:
            if part.inner is not None:
                problems += part.inner.lift_violations()
                if part.inner.cover.runs:
                    problems += audit_contributions(part.inner.reduced, part.inner.cover.runs).violations
        d = sol.decomposition
        return RunReport(name, kind, graph.n, graph.m, d.b, d.n0, solver, sol.tour.length, sol.b_bound,
                         sol.lower_bound, opt, sum(len(p.inner.trace) for p in sol.parts if p.inner),
                         {}, not problems, "; ".join(problems))
    raise ValueError(f"unknown solver {solver!r}")


def bench(cfg: BenchConfig) -> list[RunReport]:
    return [run_instance(spec, cfg) for spec in cfg.instances]


def bench_csv(reports: list[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.row())
    return buf.getvalue()


def cmd_bench(args) -> int:
    with open(args.manifest) as fh:
        raw = json.load(fh)
    cfg = BenchConfig.from_dict({"instances": raw} if isinstance(raw, list) else raw)
    if args.seed is not None:
        for spec in cfg.instances:
            spec.seed += args.seed
    reports = bench(cfg)
    text = bench_csv(reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = [r.id for r in reports if not (r.bound_ok and r.audit_ok)]
    if bad:
        print(f"{len(bad)} instance(s) failed a bound or audit: {', '.join(bad)}", file=sys.stderr)
    return VIOLATION if bad else OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubictsp", description="TSP tours on cubic graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="tour of a cubic 2-connected graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--audit", action="store_true")
    s.add_argument("--json", action="store_true")
    s.add_argument("--out", help="write the tour as an edge list")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("solve-general", help="tour of a connected cubic graph with bridges")
    s.add_argument("--graph", required=True)
    s.add_argument("--plugin-a", dest="plugin_a", help="external solver speaking the edge-list format")
    s.add_argument("--json", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve_general)

    s = sub.add_parser("barnette", help="tour of a Barnette graph from its rotation system")
    s.add_argument("--graph", required=True)
    s.add_argument("--rotation", required=True)
    s.add_argument("--audit", action="store_true")
    s.add_argument("--json", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_barnette)

    s = sub.add_parser("reduce", help="remove chorded 6-cycles")
    s.add_argument("--graph", required=True)
    s.add_argument("--emit-trace", dest="emit_trace")
    s.add_argument("--out", help="write the reduced graph")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("decompose", help="write (1/3) chi^E as a mix of 3-cut perfect matchings")
    s.add_argument("--graph", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="check a tour file against a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--tour", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle", help="exact optimum by Held-Karp (n <= 18)")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen", help="generate an instance")
    s.add_argument("--kind", required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--b", type=int)
    s.add_argument("--rule", choices=["R1", "R2", "R3", "R4"], help="for spliced_hexagon")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--rot", help="also write the rotation system (planar kinds)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="run a JSON manifest and emit CSV")
    s.add_argument("manifest")
    s.add_argument("--out")
    s.add_argument("--seed", type=int, help="offset added to every instance seed")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
