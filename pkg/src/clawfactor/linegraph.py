"""Line graphs and recovery of triangle-free root graphs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Budget, BudgetExceeded, NotALineGraph, NoTriangleFreeRoot
from .graph import Graph, bits_of, is_triangle_free


@dataclass(frozen=True)
class RootCorrespondence:
    """``line`` is L(``root``) through ``edge_to_vertex``: root edge id ``e``
    is line vertex ``edge_to_vertex[e]``."""

    root: Graph
    line: Graph
    edge_to_vertex: tuple[int, ...]

    def vertex_to_edge(self) -> list[int]:
        inv = [0] * len(self.edge_to_vertex)
        for e, v in enumerate(self.edge_to_vertex):
            inv[v] = e
        return inv

    def is_valid(self) -> bool:
        h, g = self.root, self.line
        if h.m != g.n or sorted(self.edge_to_vertex) != list(range(g.n)):
            return False
        expected = set()
        for v in range(h.n):
            inc = h.incident_edges(v)
            for i, e in enumerate(inc):
                for f in inc[i + 1 :]:
                    a, b = self.edge_to_vertex[e], self.edge_to_vertex[f]
                    expected.add((min(a, b), max(a, b)))
        return expected == set(g.edges)

    def to_json(self) -> dict:
        return {
            "root": {"n": self.root.n, "edges": [list(e) for e in self.root.edges]},
            "pairs": [[list(self.root.edge(e)), v] for e, v in enumerate(self.edge_to_vertex)],
        }


def line_graph(h: Graph) -> RootCorrespondence:
    """L(h) with vertex i standing for edge id i of h."""
    if h.m == 0:
        raise ValueError("line graph of an edgeless graph is empty")
    edges = []
    for v in range(h.n):
        inc = h.incident_edges(v)
        for i, e in enumerate(inc):
            for f in inc[i + 1 :]:
                edges.append((e, f))
    return RootCorrespondence(h, Graph(h.m, edges), tuple(range(h.m)))


def _triangle_classes(g: Graph) -> list[list[int]]:
    """Partition the edges of g into classes connected through triangles."""
    parent = list(range(g.m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, (a, b) in enumerate(g.edges):
        for c in bits_of(g.nbits(a) & g.nbits(b)):
            if c > b:
                f1, f2 = g.edge_id(a, c), g.edge_id(b, c)
                parent[find(f1)] = find(e)
                parent[find(f2)] = find(e)
    groups: dict[int, list[int]] = {}
    for e in range(g.m):
        groups.setdefault(find(e), []).append(e)
    return sorted(groups.values(), key=lambda c: c[0])


def _has_krausz_partition(g: Graph, budget: int | None) -> bool:
    """Backtracking search for any partition of E(g) into cliques that puts
    every vertex in at most two of them."""
    counter = Budget(budget, "Krausz partition")
    assigned = [False] * g.m
    load = [0] * g.n

    def cliques_through(a: int, b: int):
        cands = [
            c
            for c in bits_of(g.nbits(a) & g.nbits(b))
            if load[c] < 2 and not assigned[g.edge_id(a, c)] and not assigned[g.edge_id(b, c)]
        ]

        def grow(i: int, members: list[int]):
            yield list(members)
            for j in range(i, len(cands)):
                c = cands[j]
                if all(g.has_edge(c, x) and not assigned[g.edge_id(c, x)] for x in members[2:]):
                    members.append(c)
                    yield from grow(j + 1, members)
                    members.pop()

        yield from grow(0, [a, b])

    def rec() -> bool:
        counter.tick()
        try:
            e = assigned.index(False)
        except ValueError:
            return True
        a, b = g.edge(e)
        if load[a] >= 2 or load[b] >= 2:
            return False
        for clique in cliques_through(a, b):
            eids = [g.edge_id(x, y) for i, x in enumerate(clique) for y in clique[i + 1 :]]
            for f in eids:
                assigned[f] = True
            for x in clique:
                load[x] += 1
            if rec():
                return True
            for f in eids:
                assigned[f] = False
            for x in clique:
                load[x] -= 1
        return False

    return rec()


def root_graph(g: Graph, budget: int | None = 10**6) -> RootCorrespondence:
    """Recover a triangle-free H with L(H) = g.

    For a triangle-free root every triangle of g lies inside the clique of
    one root vertex, so the Krausz cliques are forced: they are the classes
    of edges linked through shared triangles. The partition is then checked
    (each class a clique, each vertex in at most two classes) and the root
    is read off, one root vertex per class plus a pendant vertex for every
    line vertex lying in a single class.
    """
    classes = _triangle_classes(g)
    membership: list[list[int]] = [[] for _ in range(g.n)]
    ok = True
    for ci, cls in enumerate(classes):
        verts = g.edge_subgraph_vertices(cls)
        if len(cls) != len(verts) * (len(verts) - 1) // 2:
            ok = False
            break
        for v in verts:
            membership[v].append(ci)
    if ok and any(len(ms) > 2 for ms in membership):
        ok = False
    if not ok:
        try:
            exists = _has_krausz_partition(g, budget)
        except BudgetExceeded:
            raise NotALineGraph("no triangle-free root (line-graph test ran out of budget)") from None
        if exists:
            raise NoTriangleFreeRoot("graph is a line graph but every root contains a triangle")
        raise NotALineGraph("no partition of the edges into cliques with every vertex in at most two")

    root_id: dict[tuple, int] = {}

    def rid(key: tuple) -> int:
        if key not in root_id:
            root_id[key] = len(root_id)
        return root_id[key]

    pairs = []
    for v in range(g.n):
        ends = [rid(("class", c)) for c in membership[v]]
        while len(ends) < 2:
            ends.append(rid(("pendant", v, len(ends))))
        pairs.append((ends[0], ends[1]))
    h = Graph(len(root_id), pairs)
    e2v = [0] * h.m
    for v, (a, b) in enumerate(pairs):
        e2v[h.edge_id(a, b)] = v
    corr = RootCorrespondence(h, g, tuple(e2v))
    if not is_triangle_free(h) or not corr.is_valid():
        raise NotALineGraph("recovered root does not reproduce the input")
    return corr
