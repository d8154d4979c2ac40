"""Claw detection, local connectivity and the Ryjacek closure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import NotClawFree
from .graph import Graph, bits_of, connected_components


def find_claw(g: Graph) -> Optional[tuple[int, tuple[int, int, int]]]:
    """Return ``(center, (a, b, c))`` for an induced K_{1,3}, or None."""
    for v in range(g.n):
        nb = g.neighbors(v)
        if len(nb) < 3:
            continue
        for i, a in enumerate(nb):
            rest_a = g.nbits(v) & ~g.nbits(a)
            for b in nb[i + 1 :]:
                if not (rest_a >> b) & 1:
                    continue
                common = rest_a & ~g.nbits(b) & ~((1 << (b + 1)) - 1)
                if common:
                    c = (common & -common).bit_length() - 1
                    return v, (a, b, c)
    return None


def is_claw_free(g: Graph) -> bool:
    return find_claw(g) is None


def _nbhd_connected(nbr_bits: list[int], nb: int) -> bool:
    if not nb:
        return False
    start = nb & -nb
    comp = start
    frontier = start
    while frontier:
        reach = 0
        for v in bits_of(frontier):
            reach |= nbr_bits[v]
        reach &= nb & ~comp
        comp |= reach
        frontier = reach
    return comp == nb


def is_locally_connected(g: Graph, v: int) -> bool:
    """True iff N(v) is nonempty and induces a connected subgraph."""
    if not 0 <= v < g.n:
        raise IndexError(v)
    nbr_bits = [g.nbits(u) for u in range(g.n)]
    return _nbhd_connected(nbr_bits, g.nbits(v))


def _is_clique(nbr_bits: list[int], nb: int) -> bool:
    return all((nbr_bits[u] | (1 << u)) & nb == nb for u in bits_of(nb))


@dataclass(frozen=True)
class ClosureTrace:
    input: Graph
    output: Graph
    steps: tuple[tuple[int, tuple[int, ...]], ...]  # (completed vertex, added edge ids of output)

    def added_pairs(self, step: int) -> list[tuple[int, int]]:
        return [self.output.edge(e) for e in self.steps[step][1]]

    def replay(self) -> list[Graph]:
        """Intermediate graphs, starting with the input."""
        graphs = [self.input]
        for i in range(len(self.steps)):
            graphs.append(graphs[-1].with_edges(self.added_pairs(i)))
        return graphs

    def to_json(self) -> dict:
        return {
            "steps": [{"vertex": v, "added": [list(self.output.edge(e)) for e in added]} for v, added in self.steps],
        }


def closure(g: Graph, order: Optional[Sequence[int]] = None) -> ClosureTrace:
    """Ryjacek closure of a claw-free graph with its step trace.

    At each step the eligible vertex (locally connected, neighbourhood not
    a clique) that comes first in ``order`` is completed; the default order
    is by vertex id. Only vertices whose neighbourhood changed are
    re-examined after a step.
    """
    claw = find_claw(g)
    if claw is not None:
        raise NotClawFree(claw)
    rank = list(range(g.n))
    if order is not None:
        if sorted(order) != list(range(g.n)):
            raise ValueError("order must be a permutation of the vertices")
        for r, v in enumerate(order):
            rank[v] = r
    nbr = [g.nbits(v) for v in range(g.n)]

    def eligible(v: int) -> bool:
        return _nbhd_connected(nbr, nbr[v]) and not _is_clique(nbr, nbr[v])

    pending = {v for v in range(g.n) if eligible(v)}
    raw_steps: list[tuple[int, list[tuple[int, int]]]] = []
    while pending:
        v = min(pending, key=lambda x: rank[x])
        nb = nbr[v]
        added = []
        for a in bits_of(nb):
            missing = nb & ~nbr[a] & ~((1 << (a + 1)) - 1)
            for b in bits_of(missing):
                added.append((a, b))
        dirty = nb
        for a, b in added:
            nbr[a] |= 1 << b
            nbr[b] |= 1 << a
        for a, b in added:
            dirty |= nbr[a] & nbr[b]
        raw_steps.append((v, added))
        for u in bits_of(dirty):
            if eligible(u):
                pending.add(u)
            else:
                pending.discard(u)
        pending.discard(v)
    out = g.with_edges(pair for _, added in raw_steps for pair in added)
    steps = tuple((v, tuple(out.edge_id(a, b) for a, b in added)) for v, added in raw_steps)
    return ClosureTrace(g, out, steps)


def closure_graph(g: Graph) -> Graph:
    return closure(g).output


def check_trace(trace: ClosureTrace) -> Optional[str]:
    """Independently re-verify a trace; returns a failure message or None."""
    cur = trace.input
    if find_claw(cur) is not None:
        return "input has a claw"
    for i, (v, added) in enumerate(trace.steps):
        nb = set(cur.neighbors(v))
        sub, _ = cur.induced(nb)
        if not nb or len(connected_components(sub)) != 1:
            return f"step {i}: vertex {v} is not locally connected"
        if sub.m == len(nb) * (len(nb) - 1) // 2:
            return f"step {i}: neighbourhood of {v} is already complete"
        pairs = trace.added_pairs(i)
        expected = {(a, b) for a in nb for b in nb if a < b and not cur.has_edge(a, b)}
        if set(pairs) != expected:
            return f"step {i}: added edges do not complete N({v})"
        cur = cur.with_edges(pairs)
        if find_claw(cur) is not None:
            return f"step {i}: claw created"
    if cur != trace.output:
        return "replay does not reach the output"
    for v in range(cur.n):
        if is_locally_connected(cur, v):
            nb = cur.nbits(v)
            if not all((cur.nbits(u) | (1 << u)) & nb == nb for u in bits_of(nb)):
                return f"output not closed: {v} is eligible"
    return None
