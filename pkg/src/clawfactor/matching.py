"""Exact matching kernels.

* ``max_matching_general``: Edmonds' blossom algorithm, the plain O(V^3)
  variant with explicit ``base`` / ``parent`` arrays.
* ``two_factor``: 2-factors through Tutte's degree gadget and a perfect
  matching.
* ``bipartite_matching_or_violator``: augmenting-path bipartite matching
  that returns an inclusion-minimal Hall violator when the designated side
  cannot be covered.
* ``min_cycle_two_factor_bruteforce``: exhaustive minimum-cycle 2-factor,
  used as an oracle.

Gadget correctness note
-----------------------
For a vertex v of degree d >= 2 the gadget has one stub ``s(v, u)`` per
neighbour u and d - 2 filler vertices, each filler adjacent to every stub of
v. For every edge uv the stubs ``s(v, u)`` and ``s(u, v)`` are joined. In a
perfect matching the fillers of v absorb exactly d - 2 of its stubs, so
exactly two stubs of v are matched across edges, i.e. v has degree 2 in the
selected edge set. Conversely a 2-factor selects two edges per vertex and
the remaining d - 2 stubs pair off with the fillers. A vertex of degree < 2
makes a 2-factor impossible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import Budget
from .graph import Cycle, Graph, TwoFactor, bits_of, connected_components


@dataclass(frozen=True)
class Matching:
    host: Graph
    edges: frozenset[int]

    def __len__(self) -> int:
        return len(self.edges)

    def is_valid(self) -> bool:
        seen: set[int] = set()
        for e in self.edges:
            u, v = self.host.edge(e)
            if u in seen or v in seen:
                return False
            seen.update((u, v))
        return True

    def mate(self) -> dict[int, int]:
        out = {}
        for e in self.edges:
            u, v = self.host.edge(e)
            out[u] = v
            out[v] = u
        return out


def _blossom(n: int, adj: list[list[int]], match: list[int]) -> list[int]:
    """Grow ``match`` (mate array, -1 for free) to a maximum matching."""

    def find_path(root: int) -> int:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
            while base[v] != b:
                in_blossom[base[v]] = in_blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    in_blossom = [False] * n
                    mark_path(v, cur, to, in_blossom)
                    mark_path(to, cur, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        # augment along the alternating path ending at `to`
                        x = to
                        while x != -1:
                            px = parent[x]
                            nxt = match[px]
                            match[x] = px
                            match[px] = x
                            x = nxt
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return match


def _greedy(n: int, adj: list[list[int]]) -> list[int]:
    match = [-1] * n
    for v in sorted(range(n), key=lambda x: len(adj[x])):
        if match[v] == -1:
            for u in adj[v]:
                if match[u] == -1:
                    match[u], match[v] = v, u
                    break
    return match


def max_matching_general(g: Graph) -> Matching:
    """Maximum-cardinality matching of a general graph."""
    adj = [list(g.neighbors(v)) for v in range(g.n)]
    match = _blossom(g.n, adj, _greedy(g.n, adj))
    edges = frozenset(g.edge_id(v, match[v]) for v in range(g.n) if match[v] > v)
    return Matching(g, edges)


def two_factor(g: Graph) -> Optional[TwoFactor]:
    """Some 2-factor of ``g`` via Tutte's gadget, or None if none exists."""
    if g.n == 0:
        return TwoFactor(())
    if any(g.degree(v) < 2 for v in range(g.n)):
        return None
    stub: dict[tuple[int, int], int] = {}
    count = 0
    for v in range(g.n):
        for u in g.neighbors(v):
            stub[(v, u)] = count
            count += 1
    gadget: list[list[int]] = [[] for _ in range(count)]

    def join(a: int, b: int) -> None:
        gadget[a].append(b)
        gadget[b].append(a)

    for u, v in g.edges:
        join(stub[(u, v)], stub[(v, u)])
    for v in range(g.n):
        stubs = [stub[(v, u)] for u in g.neighbors(v)]
        for _ in range(len(stubs) - 2):
            filler = len(gadget)
            gadget.append([])
            for s in stubs:
                join(filler, s)
    size = len(gadget)
    match = _blossom(size, gadget, _greedy(size, gadget))
    if any(x == -1 for x in match):
        return None
    chosen = [g.edge_id(u, v) for u, v in g.edges if match[stub[(u, v)]] == stub[(v, u)]]
    return TwoFactor.from_edges(g, chosen)


def min_cycle_two_factor_bruteforce(
    g: Graph, budget: int | None = 10**7, target: int | None = None
) -> Optional[tuple[TwoFactor, int]]:
    """Exhaustive search over 2-factors for the fewest cycles.

    Returns ``(two_factor, cycles)`` or None when ``g`` has no 2-factor.
    With ``target`` the search stops at the first 2-factor with at most that
    many cycles (the count returned is then an upper bound, not the
    minimum). Raises BudgetExceeded past ``budget`` search nodes.
    """
    counter = Budget(budget, "minimum-cycle 2-factor")
    if g.n == 0:
        return TwoFactor(()), 0
    if any(g.degree(v) < 2 for v in range(g.n)):
        return None
    floor = len(connected_components(g))
    stop_at = max(floor, target) if target is not None else floor
    best: list = [None, None]  # count, cycles
    chosen: list[tuple[int, ...]] = []

    def cycles_through(v: int, rest: int):
        """Cycles containing v (the minimum of ``rest``) inside ``rest``."""
        path = [v]
        inner = rest & ~(1 << v)

        def extend(w: int, used: int):
            counter.tick()
            for u in bits_of(g.nbits(w) & inner & ~used):
                path.append(u)
                yield from extend(u, used | (1 << u))
                path.pop()
            if len(path) >= 3 and g.has_edge(w, v) and path[1] < w:
                yield tuple(path), used | (1 << v)

        for first in bits_of(g.nbits(v) & inner):
            path.append(first)
            yield from extend(first, 1 << first)
            path.pop()

    def feasible(rest: int) -> bool:
        return all(bin(g.nbits(w) & rest).count("1") >= 2 for w in bits_of(rest))

    def rec(rest: int) -> bool:
        if not rest:
            if best[0] is None or len(chosen) < best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return best[0] <= stop_at
        lower = len(chosen) + len(connected_components(g, rest))
        if best[0] is not None and lower >= best[0]:
            return False
        v = (rest & -rest).bit_length() - 1
        for cyc, mask in cycles_through(v, rest):
            remaining = rest & ~mask
            if remaining and not feasible(remaining):
                continue
            chosen.append(cyc)
            done = rec(remaining)
            chosen.pop()
            if done:
                return True
            if best[0] is not None and len(chosen) + 1 >= best[0]:
                return False
        return False

    if not feasible(g.full_mask()):
        return None
    rec(g.full_mask())
    if best[0] is None:
        return None
    return TwoFactor.of(best[1]), best[0]


@dataclass(frozen=True)
class HallCertificate:
    """Either a matching (``mate`` maps each side vertex to its partner) or
    a violator S with |N(S)| < |S|."""

    mate: Optional[dict[int, int]] = None
    violator: Optional[frozenset[int]] = None

    @property
    def has_matching(self) -> bool:
        return self.violator is None


def neighbourhood(f: Graph, vertices: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for v in vertices:
        out.update(f.neighbors(v))
    return out


def bipartite_matching_or_violator(f: Graph, side: Iterable[int]) -> HallCertificate:
    """Match ``side`` into the rest of ``f`` or return a minimal violator.

    The violator is the alternating-reachability set of one unmatched side
    vertex under a maximum matching; any vertex of it can be dropped and
    the rest matched by flipping the alternating path to it, so no proper
    subset is a violator. A final shrinking pass (ascending vertex order)
    re-checks that.
    """
    side = sorted(set(side))
    side_set = set(side)
    for x in side:
        if side_set.intersection(f.neighbors(x)):
            raise ValueError("designated side is not independent in f")
    mate_side: dict[int, int] = {}
    mate_other: dict[int, int] = {}

    def augment(x: int, seen: set[int]) -> bool:
        for t in f.neighbors(x):
            if t in seen:
                continue
            seen.add(t)
            if t not in mate_other or augment(mate_other[t], seen):
                mate_side[x] = t
                mate_other[t] = x
                return True
        return False

    for x in side:
        augment(x, set())
    free = [x for x in side if x not in mate_side]
    if not free:
        return HallCertificate(mate=dict(mate_side))
    root = free[0]
    reach_x = {root}
    reach_t: set[int] = set()
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for t in f.neighbors(x):
            if t not in reach_t:
                reach_t.add(t)
                y = mate_other[t]
                if y not in reach_x:
                    reach_x.add(y)
                    queue.append(y)
    violator = set(reach_x)
    for y in sorted(reach_x):
        trial = violator - {y}
        if trial and len(neighbourhood(f, trial)) < len(trial):
            violator = trial
    return HallCertificate(violator=frozenset(violator))


def is_hall_violator(f: Graph, s: Iterable[int]) -> bool:
    s = set(s)
    return bool(s) and len(neighbourhood(f, s)) < len(s)
