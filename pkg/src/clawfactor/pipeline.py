"""End-to-end runs on claw-free graphs and self-contained certificates.

``run_main_theorem`` takes a claw-free G and a target k, checks the degree
hypotheses, closes G, recovers the triangle-free root H of the closure,
finds a dominating system of H with at most k elements and converts it into
a 2-factor of cl(G) with at most k cycles. For small G a 2-factor of G
itself with at most k cycles is found by exhaustive search.

``verify_certificate`` re-checks a certificate from its JSON alone.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from .closure import ClosureTrace, check_trace, closure, find_claw
from .degree import HypothesisReport, check_hypotheses
from .domination import RELAXED, STRICT, DominatingSystem, system_to_parts, system_to_two_factor, validate
from .errors import (
    BudgetExceeded,
    ClawfactorError,
    HypothesesFail,
    NotClawFree,
    NoTwoFactor,
    ReductionFailed,
)
from .graph import Graph, TwoFactor, bits_of, find_hamiltonian_cycle, is_triangle_free
from .linegraph import RootCorrespondence, root_graph
from .matching import min_cycle_two_factor_bruteforce
from .search import Witness, find_bounded_system

FORMAT = "clawfactor-certificate/1"
BRUTE_FORCE_LIMIT = 12


def graph_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_json(data: dict) -> Graph:
    return Graph(int(data["n"]), [tuple(e) for e in data["edges"]])


def digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _closure_json(trace: ClosureTrace) -> dict:
    return {"graph": graph_json(trace.output), **trace.to_json()}


def _trace_from_json(g: Graph, data: dict) -> ClosureTrace:
    out = graph_from_json(data["graph"])
    steps = tuple(
        (int(s["vertex"]), tuple(out.edge_id(a, b) for a, b in s["added"])) for s in data["steps"]
    )
    return ClosureTrace(g, out, steps)


def _root_from_json(line: Graph, data: dict) -> RootCorrespondence:
    root = graph_from_json(data["root"])
    e2v = [0] * root.m
    for (a, b), v in data["pairs"]:
        e2v[root.edge_id(a, b)] = v
    return RootCorrespondence(root, line, tuple(e2v))


def _cycles_json(tf: Optional[TwoFactor]):
    return None if tf is None else [list(c.vertices) for c in tf.cycles]


@dataclass(frozen=True)
class PipelineCertificate:
    graph: Graph
    k: int
    report: HypothesisReport
    trace: ClosureTrace
    root: RootCorrespondence
    system: DominatingSystem
    closure_two_factor: TwoFactor
    graph_two_factor: Optional[TwoFactor] = None

    def to_json(self) -> dict:
        closure_doc = _closure_json(self.trace)
        root_doc = self.root.to_json()
        return {
            "format": FORMAT,
            "k": self.k,
            "graph": graph_json(self.graph),
            "hypotheses": self.report.to_json(),
            "closure": closure_doc,
            "closure_digest": digest(closure_doc),
            "root": root_doc,
            "root_digest": digest(root_doc),
            "system": self.system.to_json(),
            "closure_two_factor": _cycles_json(self.closure_two_factor),
            "graph_two_factor": _cycles_json(self.graph_two_factor),
        }


def _search_witness(h: Graph, k: int, budget: int | None) -> Optional[Witness]:
    """Witness from the move search on a hypothesis-failing input, if any."""
    try:
        res = find_bounded_system(h, k, budget, fallback=False)
    except (NoTwoFactor, BudgetExceeded, ValueError):
        return None
    return res.witness


def run_main_theorem(
    g: Graph, k: int, budget: int | None = 10**7, brute_force_limit: int = BRUTE_FORCE_LIMIT
) -> PipelineCertificate:
    """Certificate that cl(g) (and, for small g, g) has a 2-factor with at
    most k cycles. Raises HypothesesFail when the degree hypotheses fail."""
    if k < 1:
        raise ValueError("k must be positive")
    claw = find_claw(g)
    if claw is not None:
        raise NotClawFree(claw)
    report = check_hypotheses(g, k, budget)
    trace = closure(g)
    corr = root_graph(trace.output)
    h = corr.root
    if not report.ok:
        raise HypothesesFail(report, _search_witness(h, k, budget))
    res = find_bounded_system(h, k, budget)
    if res.status == "witness":
        raise HypothesesFail(report, res.witness)
    if res.status != "system" or res.system is None:
        raise ClawfactorError(f"no dominating system with at most {k} elements (minimum {res.minimum})")
    tf = system_to_two_factor(res.system, corr)
    g_tf = None
    if g.n <= brute_force_limit:
        found = min_cycle_two_factor_bruteforce(g, budget, target=k)
        if found is None or found[1] > k:
            raise ReductionFailed(f"no 2-factor of the input with at most {k} cycles")
        g_tf = found[0]
    return PipelineCertificate(g, k, report, trace, corr, res.system, tf, g_tf)


def verify_certificate(
    data: dict, budget: int | None = 10**7, brute_force_limit: int = BRUTE_FORCE_LIMIT
) -> list[str]:
    """Problems found in a certificate document; empty when it checks out.

    Nothing is taken from the document except the objects being checked:
    hypotheses, digests and conversions are recomputed.
    """
    problems: list[str] = []
    try:
        if data.get("format") != FORMAT:
            return [f"unknown format {data.get('format')!r}"]
        k = int(data["k"])
        g = graph_from_json(data["graph"])
        if find_claw(g) is not None:
            problems.append("input graph has a claw")
        report = check_hypotheses(g, k, budget)
        if not report.ok:
            problems.append("hypotheses do not hold for the input")
        if report.to_json() != data["hypotheses"]:
            problems.append("recorded hypothesis report differs from the recomputed one")

        if digest(data["closure"]) != data["closure_digest"]:
            problems.append("closure digest mismatch")
        trace = _trace_from_json(g, data["closure"])
        msg = check_trace(trace)
        if msg is not None:
            problems.append(f"closure trace: {msg}")
        cl = trace.output

        if digest(data["root"]) != data["root_digest"]:
            problems.append("root digest mismatch")
        corr = _root_from_json(cl, data["root"])
        if not is_triangle_free(corr.root):
            problems.append("root graph has a triangle")
        if not corr.is_valid():
            problems.append("line graph of the root is not the closure")

        ds = DominatingSystem.from_json(corr.root, data["system"])
        check = validate(ds)
        if ds.mode != STRICT:
            problems.append("system is not in strict mode")
        if not check:
            problems.append(f"dominating system: {check.message}")
        if ds.cardinality > k:
            problems.append(f"system has {ds.cardinality} > {k} elements")

        tf = TwoFactor.of(data["closure_two_factor"])
        if not tf.is_valid(cl):
            problems.append("closure 2-factor is invalid")
        if len(tf) > k:
            problems.append(f"closure 2-factor has {len(tf)} > {k} cycles")
        if check and ds.mode == STRICT:
            redo = system_to_two_factor(ds, corr)
            if set(redo.cycles) != set(tf.cycles):
                problems.append("closure 2-factor does not match the converted system")

        if data.get("graph_two_factor") is not None:
            gtf = TwoFactor.of(data["graph_two_factor"])
            if not gtf.is_valid(g):
                problems.append("input 2-factor is invalid")
            if len(gtf) > k:
                problems.append(f"input 2-factor has {len(gtf)} > {k} cycles")
        elif g.n <= brute_force_limit:
            problems.append("small input without a 2-factor of the input graph")
    except (KeyError, TypeError, ValueError, ClawfactorError) as exc:
        problems.append(f"malformed certificate: {exc!r}")
    return problems


# ---------------------------------------------------------------------------
# Degenerate cycle partitions


def part_kind(g: Graph, part) -> Optional[str]:
    """``"K1"``, ``"K2"``, ``"hamiltonian"`` or None for an invalid part."""
    part = sorted(part)
    if len(part) == 1:
        return "K1"
    if len(part) == 2:
        return "K2" if g.has_edge(*part) else None
    sub, _ = g.induced(part)
    return "hamiltonian" if find_hamiltonian_cycle(sub) is not None else None


@dataclass(frozen=True)
class DegeneratePartition:
    graph: Graph
    parts: tuple[tuple[int, ...], ...]
    source: str = "closure"  # or "exhaustive"

    def __len__(self) -> int:
        return len(self.parts)

    def problems(self) -> list[str]:
        out = []
        seen = [v for p in self.parts for v in p]
        if sorted(seen) != list(range(self.graph.n)):
            out.append("parts do not partition the vertex set")
        for p in self.parts:
            if part_kind(self.graph, p) is None:
                out.append(f"part {list(p)} is not K1, K2 or Hamiltonian")
        return out

    def to_json(self) -> dict:
        return {
            "graph": graph_json(self.graph),
            "parts": [{"vertices": list(p), "kind": part_kind(self.graph, p)} for p in self.parts],
            "source": self.source,
        }


def _hamiltonian_masks(g: Graph) -> list[bool]:
    """For every vertex subset (bitmask), whether it induces a subgraph with
    a Hamilton cycle. Paths start at the lowest vertex of the mask."""
    n = g.n
    full = 1 << n
    ends = [0] * full  # bitmask of path ends for paths from low(mask) covering mask
    good = [False] * full
    for mask in range(1, full):
        low = (mask & -mask).bit_length() - 1
        if mask == 1 << low:
            ends[mask] = 1 << low
            continue
        reach = 0
        for v in bits_of(mask & ~(1 << low)):
            prev = mask & ~(1 << v)
            if ends[prev] & g.nbits(v):
                reach |= 1 << v
        ends[mask] = reach
        if bin(mask).count("1") >= 3 and reach & g.nbits(low):
            good[mask] = True
    return good


def min_degenerate_partition(g: Graph) -> DegeneratePartition:
    """Fewest parts by dynamic programming over vertex subsets (small g)."""
    n = g.n
    ham = _hamiltonian_masks(g)

    def ok(mask: int) -> bool:
        c = bin(mask).count("1")
        if c == 1:
            return True
        if c == 2:
            a, b = bits_of(mask)
            return g.has_edge(a, b)
        return ham[mask]

    full = (1 << n) - 1
    best = [0] + [n + 1] * full
    choice = [0] * (full + 1)
    for mask in range(1, full + 1):
        low = mask & -mask
        rest = mask & ~low
        sub = rest
        while True:
            part = sub | low
            if best[mask & ~part] + 1 < best[mask] and ok(part):
                best[mask] = best[mask & ~part] + 1
                choice[mask] = part
            if sub == 0:
                break
            sub = (sub - 1) & rest
    parts = []
    mask = full
    while mask:
        parts.append(tuple(bits_of(choice[mask])))
        mask &= ~choice[mask]
    return DegeneratePartition(g, tuple(sorted(parts)), "exhaustive")


def run_degenerate_partition(
    g: Graph, k: int, budget: int | None = 10**7, brute_force_limit: int = BRUTE_FORCE_LIMIT
) -> DegeneratePartition:
    """Partition of V(g) into at most k parts inducing K1, K2 or a
    Hamiltonian graph, under sigma_{k+1}(g) >= |g| only."""
    if k < 1:
        raise ValueError("k must be positive")
    if g.n == 0:
        return DegeneratePartition(g, ())
    claw = find_claw(g)
    if claw is not None:
        raise NotClawFree(claw)
    report = check_hypotheses(g, k, budget)
    if not report.sigma_ok:
        raise HypothesesFail(report)
    trace = closure(g)
    corr = root_graph(trace.output)
    res = find_bounded_system(corr.root, k, budget, mode=RELAXED)
    if res.status != "system" or res.system is None:
        raise ClawfactorError(f"no relaxed dominating system with at most {k} elements")
    parts = tuple(sorted(tuple(sorted(p)) for p in system_to_parts(res.system, corr)))
    part = DegeneratePartition(g, parts)
    if not part.problems():
        return part
    # parts of the closure need not induce the same shapes in g itself
    if g.n > brute_force_limit:
        raise ReductionFailed("closure partition is not valid in the input graph")
    part = min_degenerate_partition(g)
    if len(part) > k:
        raise ReductionFailed(f"input graph needs {len(part)} > {k} parts")
    return part


__all__ = [
    "PipelineCertificate",
    "DegeneratePartition",
    "run_main_theorem",
    "run_degenerate_partition",
    "verify_certificate",
    "min_degenerate_partition",
    "part_kind",
    "graph_json",
    "graph_from_json",
    "digest",
]
