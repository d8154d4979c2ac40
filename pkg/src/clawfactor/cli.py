"""Command line front end.

Exit codes: 0 success, 1 a hypothesis fails or a witness/negative answer is
reported, 2 invalid input, 3 a search ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from .closure import closure
from .corpus import FAMILIES, CorpusSpec, generate_corpus
from .degree import check_hypotheses
from .domination import (
    RELAXED,
    STRICT,
    DominatingSystem,
    min_system_exhaustive,
    system_to_two_factor,
    validate,
)
from .errors import BudgetExceeded, ClawfactorError, HypothesesFail, NoTwoFactor
from .graph import Graph, TwoFactor, parse_graph, serialize_graph, to_graph6
from .linegraph import line_graph, root_graph
from .matching import min_cycle_two_factor_bruteforce, two_factor
from .pipeline import graph_json, run_degenerate_partition, run_main_theorem, verify_certificate
from .search import find_bounded_system

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, doc: dict, text: str | None = None) -> None:
        if self.fmt == "json" or text is None:
            self.stream.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        else:
            self.stream.write(text if text.endswith("\n") else text + "\n")


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def read_graph(path: str) -> Graph:
    return parse_graph(read_text(path))


def cycles_text(tf: TwoFactor) -> str:
    return "\n".join(" ".join(map(str, c.vertices)) for c in tf.cycles)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_check_hypotheses(args, out: Output) -> int:
    g = read_graph(args.graph)
    report = check_hypotheses(g, args.k, args.budget)
    doc = report.to_json()
    doc["ok"] = report.ok
    out.emit(doc, f"sigma_{args.k + 1} = {doc['sigma_value']} (n = {g.n}); degree condition "
             f"{'holds' if report.degree_condition_ok else 'fails'}; "
             f"{'ok' if report.ok else 'FAIL'}")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_closure(args, out: Output) -> int:
    g = read_graph(args.graph)
    trace = closure(g)
    doc = {"graph": graph_json(trace.output)}
    if args.trace:
        doc.update(trace.to_json())
    text = serialize_graph(trace.output)
    if args.trace:
        text += "".join(f"# complete N({v}): {trace.added_pairs(i)}\n" for i, (v, _) in enumerate(trace.steps))
    out.emit(doc, text)
    return EXIT_OK


def cmd_line_graph(args, out: Output) -> int:
    g = read_graph(args.graph)
    corr = line_graph(g)
    out.emit({"graph": graph_json(corr.line), "vertex_edges": [list(e) for e in g.edges]},
             serialize_graph(corr.line))
    return EXIT_OK


def cmd_root_graph(args, out: Output) -> int:
    g = read_graph(args.graph)
    corr = root_graph(g, args.budget)
    out.emit(corr.to_json(), serialize_graph(corr.root))
    return EXIT_OK


def cmd_two_factor(args, out: Output) -> int:
    g = read_graph(args.graph)
    if args.min_cycles:
        found = min_cycle_two_factor_bruteforce(g, args.budget)
        tf = found[0] if found else None
    else:
        tf = two_factor(g)
    if tf is None:
        out.emit({"two_factor": None}, "no 2-factor")
        return EXIT_NEGATIVE
    out.emit({"two_factor": [list(c.vertices) for c in tf.cycles], "cycles": len(tf)}, cycles_text(tf))
    return EXIT_OK


def cmd_dominating_system(args, out: Output) -> int:
    h = read_graph(args.graph)
    found = min_system_exhaustive(h, args.mode, args.budget)
    if found is None:
        out.emit({"system": None}, "no dominating system")
        return EXIT_NEGATIVE
    ds, total = found
    out.emit({"system": ds.to_json(), "cardinality": total}, f"minimum cardinality {total}\n"
             + json.dumps(ds.to_json()))
    return EXIT_OK


def cmd_convert_system(args, out: Output) -> int:
    h = read_graph(args.graph)
    ds = DominatingSystem.from_json(h, json.loads(read_text(args.system)))
    check = validate(ds)
    if not check:
        out.emit({"valid": False, "message": check.message}, f"invalid system: {check.message}")
        return EXIT_INVALID
    corr = line_graph(h)
    tf = system_to_two_factor(ds, corr)
    doc = {
        "line_graph": graph_json(corr.line),
        "two_factor": [list(c.vertices) for c in tf.cycles],
        "cycles": len(tf),
    }
    out.emit(doc, cycles_text(tf))
    return EXIT_OK


def cmd_bounded_system(args, out: Output) -> int:
    h = read_graph(args.graph)
    mode = RELAXED if args.relaxed else STRICT
    try:
        res = find_bounded_system(h, args.k, args.budget, mode=mode)
    except NoTwoFactor:
        out.emit({"status": "no-two-factor"}, "line graph has no 2-factor")
        return EXIT_NEGATIVE
    doc = {
        "status": res.status,
        "moves": res.moves,
        "used_fallback": res.used_fallback,
        "objectives": [list(o) for o in res.objectives],
    }
    if res.status == "system":
        doc["system"] = res.system.to_json()
        out.emit(doc, json.dumps(doc["system"]))
        return EXIT_OK
    if res.status == "witness":
        doc["witness"] = res.witness.to_json()
        out.emit(doc, "hypotheses fail: " + json.dumps(doc["witness"]))
        return EXIT_NEGATIVE
    doc["minimum"] = res.minimum
    out.emit(doc, f"every dominating system has more than {args.k} elements (minimum {res.minimum})")
    return EXIT_NEGATIVE


def _hypotheses_fail(exc: HypothesesFail, out: Output) -> int:
    doc = {"status": "hypotheses-fail", "report": exc.report.to_json()}
    if exc.witness is not None:
        doc["witness"] = exc.witness.to_json()
    out.emit(doc, "hypotheses fail: " + json.dumps(doc["report"]))
    return EXIT_NEGATIVE


def cmd_run(args, out: Output) -> int:
    g = read_graph(args.graph)
    try:
        cert = run_main_theorem(g, args.k, args.budget)
    except HypothesesFail as exc:
        return _hypotheses_fail(exc, out)
    doc = cert.to_json()
    out.emit(doc, f"2-factor of the closure with {len(cert.closure_two_factor)} cycle(s):\n"
             + cycles_text(cert.closure_two_factor))
    return EXIT_OK


def cmd_partition(args, out: Output) -> int:
    g = read_graph(args.graph)
    try:
        part = run_degenerate_partition(g, args.k, args.budget)
    except HypothesesFail as exc:
        return _hypotheses_fail(exc, out)
    out.emit(part.to_json(), "\n".join(" ".join(map(str, p)) for p in part.parts))
    return EXIT_OK


def cmd_gen(args, out: Output) -> int:
    spec = CorpusSpec(
        family=args.family,
        max_edges=args.max_edges,
        count=args.count,
        n_min=args.n_min,
        n_max=args.n_max,
        k_min=args.k_min,
        k_max=args.k_max,
        seed=args.seed,
    )
    graphs = list(generate_corpus(spec))
    out.emit({"graphs": [to_graph6(g) for g in graphs]}, "\n".join(to_graph6(g) for g in graphs))
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    data = json.loads(read_text(args.certificate))
    problems = verify_certificate(data, args.budget)
    out.emit({"ok": not problems, "problems": problems}, "certificate ok" if not problems else "\n".join(problems))
    return EXIT_OK if not problems else EXIT_INVALID


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    common.add_argument("--budget", type=int, default=10**7, help="node cap for exhaustive searches")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="clawfactor", description="2-factors with few cycles in claw-free graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("check-hypotheses", cmd_check_hypotheses, "check sigma_{k+1} >= n and the degree condition")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("graph")
    p = add("closure", cmd_closure, "closure of a claw-free graph")
    p.add_argument("--trace", action="store_true")
    p.add_argument("graph")
    add("line-graph", cmd_line_graph, "line graph").add_argument("graph")
    add("root-graph", cmd_root_graph, "triangle-free root of a line graph").add_argument("graph")
    p = add("two-factor", cmd_two_factor, "some 2-factor, or one with fewest cycles")
    p.add_argument("--min-cycles", action="store_true")
    p.add_argument("graph")
    p = add("dominating-system", cmd_dominating_system, "minimum dominating system (exhaustive)")
    p.add_argument("--min", action="store_true", help="minimum cardinality (the only supported search)")
    p.add_argument("--mode", choices=(STRICT, RELAXED), default=STRICT)
    p.add_argument("graph")
    p = add("convert-system", cmd_convert_system, "dominating system to a 2-factor of the line graph")
    p.add_argument("graph")
    p.add_argument("system")
    p = add("bounded-system", cmd_bounded_system, "dominating system with at most k elements")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("graph")
    p = add("run", cmd_run, "certificate for a 2-factor with at most k cycles")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("graph")
    p = add("partition", cmd_partition, "partition into at most k parts inducing K1, K2 or Hamiltonian graphs")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("graph")
    p = add("gen", cmd_gen, "generate a corpus as graph6 lines")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--max-edges", type=int, default=6)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=4)
    add("verify", cmd_verify, "re-check a certificate").add_argument("certificate")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    if getattr(args, "k", 1) is not None and getattr(args, "k", 1) < 1:
        print("error: --k must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ClawfactorError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
