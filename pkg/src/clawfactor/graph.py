"""Immutable simple graphs, cycle-like subgraph types, and text I/O.

Vertices are dense integers ``0..n-1``. Edges are stored as pairs ``(u, v)``
with ``u < v`` in lexicographic order, and an edge id is the position of the
pair in that order. Adjacency is kept both as sorted tuples and as integer
bitsets; the search kernels elsewhere in the package work on the bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import GraphFormatError


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Instances are immutable and hashable; equality compares the vertex count
    and the edge list.
    """

    __slots__ = ("n", "edges", "_adj", "_bits", "_edge_id")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphFormatError(f"negative vertex count {n}")
        pairs = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            pair = (u, v) if u < v else (v, u)
            if pair in pairs:
                raise GraphFormatError(f"duplicate edge {pair}")
            pairs.add(pair)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(pairs))
        self._edge_id = {e: i for i, e in enumerate(self.edges)}
        adj: list[list[int]] = [[] for _ in range(n)]
        bits = [0] * n
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
            bits[u] |= 1 << v
            bits[v] |= 1 << u
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._bits = tuple(bits)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def nbits(self, v: int) -> int:
        """Neighborhood of ``v`` as a bitset."""
        return self._bits[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return (self._bits[u] >> v) & 1 == 1

    def edge_id(self, u: int, v: int) -> int:
        return self._edge_id[(u, v) if u < v else (v, u)]

    def edge(self, eid: int) -> tuple[int, int]:
        return self.edges[eid]

    def incident_edges(self, v: int) -> list[int]:
        return [self.edge_id(v, u) for u in self._adj[v]]

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges) + list(extra))

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled densely; also returns new-to-old ids."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        sub = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), sub), keep

    def edge_subgraph_vertices(self, eids: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for e in eids:
            out.update(self.edges[e])
        return out

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# Common small graphs


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


# ---------------------------------------------------------------------------
# Predicates and traversal


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges:
        if g.nbits(u) & g.nbits(v):
            return False
    return True


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    for u, v in g.edges:
        common = g.nbits(u) & g.nbits(v)
        if common:
            w = (common & -common).bit_length() - 1
            return tuple(sorted((u, v, w)))  # type: ignore[return-value]
    return None


def connected_components(g: Graph, within: int | None = None) -> list[set[int]]:
    """Vertex sets of the components of ``g`` (optionally of ``g[within]``)."""
    remaining = g.full_mask() if within is None else within
    out = []
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            reach = 0
            for v in bits_of(frontier):
                reach |= g.nbits(v)
            reach &= remaining & ~comp
            comp |= reach
            frontier = reach
        remaining &= ~comp
        out.append(set(bits_of(comp)))
    return out


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] != -1:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if side[u] == -1:
                    side[u] = 1 - side[v]
                    stack.append(u)
                elif side[u] == side[v]:
                    return False
    return True


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or None for forests."""
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for v in queue:
            for u in g.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    length = dist[u] + dist[v] + 1
                    if best is None or length < best:
                        best = length
    return best


# ---------------------------------------------------------------------------
# Cycles, 2-factors, closed trails


def canonical_cycle(vertices: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the minimum vertex leads, then pick the direction whose
    second vertex is smaller."""
    seq = list(vertices)
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


@dataclass(frozen=True)
class Cycle:
    """A cycle given by its cyclic vertex sequence, stored canonically."""

    vertices: tuple[int, ...]

    @classmethod
    def of(cls, vertices: Sequence[int]) -> "Cycle":
        return cls(canonical_cycle(vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex_pairs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def edge_ids(self, host: Graph) -> list[int]:
        return [host.edge_id(u, v) for u, v in self.vertex_pairs()]

    def is_valid(self, host: Graph) -> bool:
        vs = self.vertices
        if len(vs) < 3 or len(set(vs)) != len(vs):
            return False
        if any(not (0 <= v < host.n) for v in vs):
            return False
        return all(host.has_edge(u, v) for u, v in self.vertex_pairs())


@dataclass(frozen=True)
class TwoFactor:
    cycles: tuple[Cycle, ...]

    @classmethod
    def of(cls, cycles: Iterable[Sequence[int] | Cycle]) -> "TwoFactor":
        cs = [c if isinstance(c, Cycle) else Cycle.of(c) for c in cycles]
        return cls(tuple(sorted(cs, key=lambda c: c.vertices)))

    @classmethod
    def from_edges(cls, host: Graph, eids: Iterable[int]) -> "TwoFactor":
        """Decompose a 2-regular spanning edge set into its cycles."""
        nbr: dict[int, list[int]] = {v: [] for v in range(host.n)}
        for e in eids:
            u, v = host.edge(e)
            nbr[u].append(v)
            nbr[v].append(u)
        if any(len(a) != 2 for a in nbr.values()):
            raise ValueError("edge set is not 2-regular and spanning")
        seen: set[int] = set()
        cycles = []
        for s in range(host.n):
            if s in seen:
                continue
            walk = [s]
            seen.add(s)
            prev, cur = s, nbr[s][0]
            while cur != s:
                walk.append(cur)
                seen.add(cur)
                a, b = nbr[cur]
                prev, cur = cur, (b if a == prev else a)
            cycles.append(walk)
        return cls.of(cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    def edge_ids(self, host: Graph) -> list[int]:
        return [e for c in self.cycles for e in c.edge_ids(host)]

    def is_valid(self, host: Graph) -> bool:
        """Check every cycle and, separately, that each host vertex has
        degree exactly 2 in the union of the cycle edges."""
        if not all(c.is_valid(host) for c in self.cycles):
            return False
        deg = [0] * host.n
        used = set()
        for c in self.cycles:
            for u, v in c.vertex_pairs():
                key = (min(u, v), max(u, v))
                if key in used:
                    return False
                used.add(key)
                deg[u] += 1
                deg[v] += 1
        return all(d == 2 for d in deg)


@dataclass(frozen=True)
class EdgeSubgraph:
    """A set of edge ids of a host graph."""

    host: Graph
    edges: frozenset[int]

    def vertices(self) -> set[int]:
        return self.host.edge_subgraph_vertices(self.edges)

    def degree_map(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for e in self.edges:
            for v in self.host.edge(e):
                deg[v] = deg.get(v, 0) + 1
        return deg

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.degree_map().values())

    def is_connected(self) -> bool:
        if not self.edges:
            return True
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            u, v = self.host.edge(e)
            parent[find(u)] = find(v)
        return len({find(v) for v in self.vertices()}) == 1

    def is_closed_trail(self) -> bool:
        """Connected, nonempty and every vertex of even degree."""
        return bool(self.edges) and self.is_even() and self.is_connected()

    def components(self) -> list[frozenset[int]]:
        """Edge sets of the connected components."""
        by_vertex: dict[int, list[int]] = {}
        for e in self.edges:
            for v in self.host.edge(e):
                by_vertex.setdefault(v, []).append(e)
        seen: set[int] = set()
        out = []
        for e0 in sorted(self.edges):
            if e0 in seen:
                continue
            comp = {e0}
            stack = [e0]
            seen.add(e0)
            while stack:
                e = stack.pop()
                for v in self.host.edge(e):
                    for f in by_vertex[v]:
                        if f not in seen:
                            seen.add(f)
                            comp.add(f)
                            stack.append(f)
            out.append(frozenset(comp))
        return out


def euler_circuit(host: Graph, eids: Iterable[int], start: int | None = None) -> list[int]:
    """Hierholzer's algorithm on a connected even edge set.

    Returns the closed vertex walk without repeating the start at the end.
    Neighbors are taken in ascending edge-id order, so the result is
    deterministic.
    """
    eids = sorted(eids)
    if not eids:
        raise ValueError("empty edge set has no circuit")
    inc: dict[int, list[int]] = {}
    for e in eids:
        u, v = host.edge(e)
        inc.setdefault(u, []).append(e)
        inc.setdefault(v, []).append(e)
    for lst in inc.values():
        lst.reverse()
    if start is None:
        start = min(inc)
    used: set[int] = set()
    stack = [start]
    circuit = []
    while stack:
        v = stack[-1]
        lst = inc[v]
        while lst and lst[-1] in used:
            lst.pop()
        if lst:
            e = lst.pop()
            used.add(e)
            a, b = host.edge(e)
            stack.append(b if a == v else a)
        else:
            circuit.append(stack.pop())
    if len(used) != len(eids):
        raise ValueError("edge set is not connected")
    circuit.reverse()
    return circuit[:-1]


@dataclass(frozen=True)
class ClosedTrail:
    """Closed trail stored as its vertex walk ``w0 w1 ... w(L-1)``; the edges
    are ``w_i w_(i+1)`` cyclically and the traversal order fixes an
    orientation. ``walk[0]`` is the anchor vertex."""

    walk: tuple[int, ...]

    @classmethod
    def from_edges(cls, host: Graph, eids: Iterable[int], start: int | None = None) -> "ClosedTrail":
        return cls(tuple(euler_circuit(host, eids, start)))

    def __len__(self) -> int:
        return len(self.walk)

    def vertex_pairs(self) -> list[tuple[int, int]]:
        w = self.walk
        return [(w[i], w[(i + 1) % len(w)]) for i in range(len(w))]

    def edge_ids(self, host: Graph) -> list[int]:
        return [host.edge_id(u, v) for u, v in self.vertex_pairs()]

    def vertices(self) -> set[int]:
        return set(self.walk)

    def successor(self, v: int) -> int:
        """Vertex following the first occurrence of ``v`` along the walk."""
        i = self.walk.index(v)
        return self.walk[(i + 1) % len(self.walk)]

    def is_valid(self, host: Graph) -> bool:
        """Sequence check: consecutive vertices adjacent, no repeated edge."""
        if len(self.walk) < 3:
            return False
        seen = set()
        for u, v in self.vertex_pairs():
            if not (0 <= u < host.n and 0 <= v < host.n) or not host.has_edge(u, v):
                return False
            e = host.edge_id(u, v)
            if e in seen:
                return False
            seen.add(e)
        return True


def enumerate_cycles(g: Graph, length_cap: int) -> Iterator[Cycle]:
    """Yield every cycle of length at most ``length_cap`` exactly once.

    Each cycle is found from its minimum vertex ``s`` by a path search over
    vertices larger than ``s``; the reflection is dropped by requiring the
    second vertex to be smaller than the last one.
    """
    if length_cap < 3:
        return
    for s in range(g.n):
        higher = g.full_mask() & ~((1 << (s + 1)) - 1)
        start_nbrs = g.nbits(s) & higher
        path = [s]

        def extend(v: int, used: int) -> Iterator[Cycle]:
            if len(path) >= 3 and (start_nbrs >> v) & 1 and path[1] < v:
                yield Cycle(tuple(path))
            if len(path) >= length_cap:
                return
            for u in bits_of(g.nbits(v) & higher & ~used):
                path.append(u)
                yield from extend(u, used | (1 << u))
                path.pop()

        for first in bits_of(start_nbrs):
            path.append(first)
            yield from extend(first, 1 << first)
            path.pop()


def find_hamiltonian_cycle(g: Graph) -> Cycle | None:
    """Backtracking search for a Hamilton cycle (None if there is none)."""
    n = g.n
    if n < 3:
        return None
    if any(g.degree(v) < 2 for v in range(n)):
        return None
    if not is_connected(g):
        return None
    full = g.full_mask()
    path = [0]

    def extend(v: int, used: int) -> bool:
        if used == full:
            return g.has_edge(v, 0)
        rest = full & ~used
        # every unvisited vertex needs two usable neighbours
        for w in bits_of(rest):
            avail = g.nbits(w) & (rest | 1 | (1 << v))
            if bin(avail).count("1") < 2:
                return False
        for u in bits_of(g.nbits(v) & rest):
            path.append(u)
            if extend(u, used | (1 << u)):
                return True
            path.pop()
        return False

    if extend(0, 1):
        return Cycle.of(path)
    return None


# ---------------------------------------------------------------------------
# Text formats


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse edge-list text (``"n m"`` then ``m`` lines ``"u v"``) or graph6."""
    stripped = text.strip()
    if not stripped:
        raise GraphFormatError("empty input")
    if stripped.startswith(">>graph6<<") or 63 <= ord(stripped[0]) <= 126:
        return from_graph6(stripped)
    lines = [ln.strip() for ln in stripped.splitlines()]
    lines = [ln for ln in lines if ln]
    header = lines[0].split()
    if len(header) != 2:
        raise GraphFormatError(f"malformed header {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphFormatError(f"malformed header {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise GraphFormatError(f"malformed header {lines[0]!r}")
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)} edge lines")
    edges = []
    for lineno, line in enumerate(body, start=2):
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}") from None
        edges.append((u, v))
    return Graph(n, edges)


def _g6_size(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + int("".join(map(str, bits[i : i + 6])), 2)) for i in range(0, len(bits), 6)
    )
    return _g6_size(g.n) + body


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s or any(not (63 <= ord(c) <= 126) for c in s):
        raise GraphFormatError("invalid graph6 byte")
    vals = [ord(c) - 63 for c in s]
    if vals[0] == 63:
        if len(vals) >= 2 and vals[1] == 63:
            if len(vals) < 8:
                raise GraphFormatError("truncated graph6 size")
            n = 0
            for x in vals[2:8]:
                n = (n << 6) | x
            data = vals[8:]
        else:
            if len(vals) < 4:
                raise GraphFormatError("truncated graph6 size")
            n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
            data = vals[4:]
    else:
        n = vals[0]
        data = vals[1:]
    need = n * (n - 1) // 2
    if len(data) != (need + 5) // 6:
        raise GraphFormatError(f"graph6 body has {len(data)} bytes, expected {(need + 5) // 6}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (data[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)
