"""Deterministic graph streams for experiments and tests.

Families:

* ``triangle-free``: every connected triangle-free graph with 1..max_edges
  edges, one per isomorphism class, by canonical augmentation.
* ``clawfree``: random claw-free graphs (a random graph with claw edges
  deleted at random until no claw is left).
* ``extremal``: the sharpness graphs G_k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .closure import find_claw
from .degree import build_extremal
from .graph import Graph, connected_components

# ---------------------------------------------------------------------------
# Canonical labelling


def _refine(g: Graph, colors: list[int]) -> list[int]:
    """Colour refinement to the coarsest equitable partition. Colours are
    dense ranks and the result depends only on the isomorphism type."""
    n = g.n
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in g.neighbors(v)))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == len(set(colors)):
            return new
        colors = new


def _twins(g: Graph, a: int, b: int) -> bool:
    return (g.nbits(a) & ~(1 << b)) == (g.nbits(b) & ~(1 << a))


def canonical_labeling(g: Graph, colors: Optional[Sequence[int]] = None) -> tuple[tuple, list[int]]:
    """``(form, label)`` where ``label[v]`` is the new id of vertex v.

    Two vertex-coloured graphs are isomorphic iff their forms are equal.
    Individualisation-refinement search; within a target cell only one
    vertex per twin class is tried (swapping twins is an automorphism).
    """
    n = g.n
    init = list(colors) if colors is not None else [0] * n
    # rank initial colours so that only their order matters
    ranks = {c: i for i, c in enumerate(sorted(set(init)))}
    start = _refine(g, [ranks[c] for c in init])
    best: list = [None, None]

    def leaf(col: list[int]) -> None:
        label = col  # discrete: colours are 0..n-1
        form = (
            n,
            tuple(init[v] for v in sorted(range(n), key=lambda x: label[x])),
            tuple(sorted(tuple(sorted((label[u], label[v]))) for u, v in g.edges)),
        )
        if best[0] is None or form < best[0]:
            best[0], best[1] = form, list(label)

    def search(col: list[int]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(col):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            leaf(col)
            return
        target = min((c for c in cells if len(cells[c]) > 1), key=lambda c: (len(cells[c]), c))
        tried: list[int] = []
        for v in cells[target]:
            if any(_twins(g, v, w) for w in tried):
                continue
            tried.append(v)
            nxt = [2 * c + (1 if (c == target and u != v) else 0) for u, c in enumerate(col)]
            search(_refine(g, nxt))

    search(start)
    return best[0], best[1]


def canonical_form(g: Graph, colors: Optional[Sequence[int]] = None) -> tuple:
    return canonical_labeling(g, colors)[0]


def canonical_graph(g: Graph) -> Graph:
    _, label = canonical_labeling(g)
    return g.relabel(label)


# ---------------------------------------------------------------------------
# Connected triangle-free graphs by canonical augmentation


def _removable_edges(g: Graph) -> list[int]:
    """Edges whose deletion (with a resulting isolated leaf) leaves a
    connected graph with one edge less."""
    out = []
    for e, (u, v) in enumerate(g.edges):
        if g.degree(u) == 1 or g.degree(v) == 1:
            out.append(e)
            continue
        rest = Graph(g.n, [p for i, p in enumerate(g.edges) if i != e])
        if len(connected_components(rest)) == 1:
            out.append(e)
    return out


def _marked_form(g: Graph, e: int) -> tuple:
    u, v = g.edge(e)
    colors = [0] * g.n
    colors[u] = colors[v] = 1
    return canonical_form(g, colors)


def _canonical_parent_edge(g: Graph) -> int:
    """The removable edge with the largest canonical image (iso-invariant up
    to automorphism)."""
    _, label = canonical_labeling(g)
    return max(_removable_edges(g), key=lambda e: tuple(sorted((label[g.edge(e)[0]], label[g.edge(e)[1]]))))


def _children(p: Graph) -> Iterator[tuple[Graph, int]]:
    """Connected triangle-free one-edge extensions with the added edge id."""
    for a in range(p.n):
        # pendant vertex
        child = Graph(p.n + 1, list(p.edges) + [(a, p.n)])
        yield child, child.edge_id(a, p.n)
    for a in range(p.n):
        for b in range(a + 1, p.n):
            if not p.has_edge(a, b) and not (p.nbits(a) & p.nbits(b)):
                child = p.with_edges([(a, b)])
                yield child, child.edge_id(a, b)


def connected_triangle_free(max_edges: int) -> Iterator[Graph]:
    """All connected triangle-free graphs with 1..max_edges edges, one per
    isomorphism class, in order of edge count."""
    if max_edges < 1:
        return
    level = [Graph(2, [(0, 1)])]
    yield level[0]
    for _ in range(max_edges - 1):
        nxt = []
        for parent in level:
            seen: set[tuple] = set()
            for child, e in _children(parent):
                if e not in _removable_edges(child):
                    continue
                form, label = canonical_labeling(child)
                if form in seen:
                    continue
                star = _canonical_parent_edge(child)
                if star != e and _marked_form(child, e) != _marked_form(child, star):
                    continue
                seen.add(form)
                nxt.append(child)
        nxt.sort(key=lambda g: canonical_form(g))
        for g in nxt:
            yield g
        level = nxt


# ---------------------------------------------------------------------------
# Random claw-free graphs


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_clawfree(n: int, p: float, rng: random.Random) -> Graph:
    """G(n, p) with a random edge of some claw deleted until claw-free."""
    g = random_graph(n, p, rng)
    while True:
        claw = find_claw(g)
        if claw is None:
            return g
        center, leaves = claw
        drop = g.edge_id(center, rng.choice(leaves))
        g = Graph(g.n, [e for i, e in enumerate(g.edges) if i != drop])


# ---------------------------------------------------------------------------
# Stream front end


@dataclass(frozen=True)
class CorpusSpec:
    family: str
    max_edges: int = 6
    count: int = 100
    n_min: int = 4
    n_max: int = 12
    p_min: float = 0.3
    p_max: float = 0.9
    k_min: int = 1
    k_max: int = 4
    seed: int = 0


FAMILIES = ("triangle-free", "clawfree", "extremal")


def generate_corpus(spec: CorpusSpec) -> Iterator[Graph]:
    if spec.family == "triangle-free":
        yield from connected_triangle_free(spec.max_edges)
    elif spec.family == "clawfree":
        rng = random.Random(spec.seed)
        for _ in range(spec.count):
            n = rng.randint(spec.n_min, spec.n_max)
            p = rng.uniform(spec.p_min, spec.p_max)
            yield random_clawfree(n, p, rng)
    elif spec.family == "extremal":
        for k in range(spec.k_min, spec.k_max + 1):
            yield build_extremal(k)
    else:
        raise ValueError(f"unknown family {spec.family!r}; expected one of {', '.join(FAMILIES)}")
