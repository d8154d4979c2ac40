"""Dominating systems of a root graph and their 2-factor counterparts.

A dominating system of H is a family of pairwise edge-disjoint closed
trails and stars such that every edge outside the family has an end on one
of the trails. Stars need at least three edges in ``strict`` mode and at
least one in ``relaxed`` mode. Through the line graph, a strict system with
k elements corresponds to a 2-factor of L(H) with k cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import Budget, ReductionFailed
from .graph import ClosedTrail, Cycle, EdgeSubgraph, Graph, TwoFactor, bits_of
from .linegraph import RootCorrespondence

STRICT = "strict"
RELAXED = "relaxed"
MIN_STAR = {STRICT: 3, RELAXED: 1}


@dataclass(frozen=True)
class Star:
    center: int
    edges: frozenset[int]

    @classmethod
    def of(cls, host: Graph, center: int, leaves: Iterable[int]) -> "Star":
        return cls(center, frozenset(host.edge_id(center, v) for v in leaves))

    def leaves(self, host: Graph) -> list[int]:
        out = []
        for e in self.edges:
            u, v = host.edge(e)
            out.append(v if u == self.center else u)
        return sorted(out)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Validation:
    ok: bool
    message: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class DominatingSystem:
    host: Graph
    trails: tuple[ClosedTrail, ...] = ()
    stars: tuple[Star, ...] = ()
    mode: str = STRICT
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def cardinality(self) -> int:
        return len(self.trails) + len(self.stars)

    def trail_edges(self) -> set[int]:
        if "trail_edges" not in self._cache:
            self._cache["trail_edges"] = {e for t in self.trails for e in t.edge_ids(self.host)}
        return set(self._cache["trail_edges"])

    def covered_edges(self) -> set[int]:
        out = self.trail_edges()
        for s in self.stars:
            out |= s.edges
        return out

    def trail_vertices(self) -> set[int]:
        return {v for t in self.trails for v in t.walk}

    def centers(self) -> list[int]:
        return [s.center for s in self.stars]

    def objective(self) -> tuple[int, int]:
        """Lexicographic objective: fewer elements, then more covered edges."""
        return (self.cardinality, -len(self.covered_edges()))

    def replace(self, trails=None, stars=None) -> "DominatingSystem":
        return DominatingSystem(
            self.host,
            tuple(self.trails if trails is None else trails),
            tuple(self.stars if stars is None else stars),
            self.mode,
        )

    def to_json(self) -> dict:
        h = self.host
        return {
            "mode": self.mode,
            "trails": [list(t.walk) for t in self.trails],
            "stars": [{"center": s.center, "leaves": s.leaves(h)} for s in self.stars],
        }

    @classmethod
    def from_json(cls, host: Graph, data: dict) -> "DominatingSystem":
        trails = tuple(ClosedTrail(tuple(w)) for w in data.get("trails", []))
        stars = tuple(Star.of(host, s["center"], s["leaves"]) for s in data.get("stars", []))
        return cls(host, trails, stars, data.get("mode", STRICT))


def validate(ds: DominatingSystem) -> Validation:
    """Check element shapes, pairwise edge-disjointness and domination."""
    h = ds.host
    if ds.mode not in MIN_STAR:
        return Validation(False, f"unknown mode {ds.mode!r}")
    owner: dict[int, str] = {}
    for i, t in enumerate(ds.trails):
        if not t.is_valid(h):
            return Validation(False, f"trail {i} is not a closed trail of the host")
        for e in t.edge_ids(h):
            if e in owner:
                return Validation(False, f"edge {h.edge(e)} used by {owner[e]} and trail {i}")
            owner[e] = f"trail {i}"
    for i, s in enumerate(ds.stars):
        if len(s.edges) < MIN_STAR[ds.mode]:
            return Validation(False, f"star {i} has {len(s.edges)} edges ({ds.mode} mode)")
        if not 0 <= s.center < h.n:
            return Validation(False, f"star {i} has invalid center")
        for e in s.edges:
            if not 0 <= e < h.m or s.center not in h.edge(e):
                return Validation(False, f"star {i} has an edge not at its center")
            if e in owner:
                return Validation(False, f"edge {h.edge(e)} used by {owner[e]} and star {i}")
            owner[e] = f"star {i}"
    on_trail = ds.trail_vertices()
    for e, (u, v) in enumerate(h.edges):
        if e not in owner and u not in on_trail and v not in on_trail:
            return Validation(False, f"edge {(u, v)} is neither covered nor dominated")
    return Validation(True)


# ---------------------------------------------------------------------------
# Conversions between systems and 2-factors of the line graph


def dominated_assignment(ds: DominatingSystem) -> dict[tuple[int, int], list[int]]:
    """Map ``(trail index, walk position)`` to the uncovered edges spliced in
    there: each uncovered edge goes to its smallest trail-endpoint
    occurrence."""
    h = ds.host
    first: dict[int, tuple[int, int]] = {}
    for ti, t in enumerate(ds.trails):
        for pos, v in enumerate(t.walk):
            first.setdefault(v, (ti, pos))
    covered = ds.covered_edges()
    slots: dict[tuple[int, int], list[int]] = {}
    for e, (u, v) in enumerate(h.edges):
        if e in covered:
            continue
        spots = [first[x] for x in (u, v) if x in first]
        if not spots:
            raise ReductionFailed(f"edge {(u, v)} has no trail endpoint")
        slots.setdefault(min(spots), []).append(e)
    return slots


def system_edge_groups(ds: DominatingSystem) -> list[list[int]]:
    """Per element, the root edges in the cyclic order of the line-graph
    cycle (or clique, for small relaxed stars) that it induces."""
    h = ds.host
    slots = dominated_assignment(ds)
    groups = []
    for ti, t in enumerate(ds.trails):
        seq = []
        eids = t.edge_ids(h)
        for pos in range(len(t.walk)):
            seq.extend(sorted(slots.get((ti, pos), [])))
            seq.append(eids[pos])
        groups.append(seq)
    for s in ds.stars:
        groups.append(sorted(s.edges))
    return groups


def system_to_two_factor(ds: DominatingSystem, corr: RootCorrespondence) -> TwoFactor:
    """The 2-factor of L(H) with one cycle per element of a strict system."""
    if ds.mode != STRICT:
        raise ValueError("system_to_two_factor needs a strict-mode system")
    if corr.root != ds.host:
        raise ValueError("correspondence root differs from the system host")
    check = validate(ds)
    if not check:
        raise ValueError(f"invalid dominating system: {check.message}")
    e2v = corr.edge_to_vertex
    tf = TwoFactor.of([e2v[e] for e in grp] for grp in system_edge_groups(ds))
    if not tf.is_valid(corr.line):
        raise ReductionFailed("converted cycles do not form a 2-factor")
    return tf


def system_to_parts(ds: DominatingSystem, corr: RootCorrespondence) -> list[list[int]]:
    """Vertex sets of L(H), one per element; used for relaxed systems."""
    check = validate(ds)
    if not check:
        raise ValueError(f"invalid dominating system: {check.message}")
    e2v = corr.edge_to_vertex
    return [[e2v[e] for e in grp] for grp in system_edge_groups(ds)]


def _common_vertex(h: Graph, eids: list[int]) -> Optional[int]:
    common = set(h.edge(eids[0]))
    for e in eids[1:]:
        common &= set(h.edge(e))
    return min(common) if common else None


def cycle_to_element(h: Graph, eids: list[int]) -> tuple[str, object]:
    """Pull one line-graph cycle back to a star or a closed trail.

    ``eids`` lists root edges in cycle order. If they share a vertex the
    element is a star. Otherwise ``c_i`` (the vertex shared by consecutive
    edges i and i+1) changes exactly along the traversed edges, which form
    a closed trail; the other edges hang at a trail vertex and are
    dominated.
    """
    center = _common_vertex(h, eids)
    if center is not None:
        return "star", Star(center, frozenset(eids))
    m = len(eids)
    shared = []
    for i in range(m):
        a, b = set(h.edge(eids[i])), set(h.edge(eids[(i + 1) % m]))
        both = a & b
        if len(both) != 1:
            raise ReductionFailed("consecutive cycle vertices are not adjacent edges")
        shared.append(both.pop())
    traversed = [i for i in range(m) if shared[i - 1] != shared[i]]
    walk = [shared[i] for i in traversed]
    trail = ClosedTrail(tuple(walk[-1:] + walk[:-1]))
    if not trail.is_valid(h):
        raise ReductionFailed("pulled-back walk is not a closed trail")
    return "trail", trail


def two_factor_to_system(tf: TwoFactor, corr: RootCorrespondence) -> DominatingSystem:
    """Strict dominating system of the root with one element per cycle."""
    if not tf.is_valid(corr.line):
        raise ValueError("not a 2-factor of the line graph")
    h = corr.root
    v2e = corr.vertex_to_edge()
    trails, stars = [], []
    for c in tf.cycles:
        kind, elem = cycle_to_element(h, [v2e[v] for v in c.vertices])
        (trails if kind == "trail" else stars).append(elem)
    ds = DominatingSystem(h, tuple(trails), tuple(stars), STRICT)
    check = validate(ds)
    if not check:
        raise ReductionFailed(check.message or "invalid system")
    return ds


# ---------------------------------------------------------------------------
# Exhaustive search


def cycle_space_basis(h: Graph) -> list[int]:
    """Fundamental cycles of a spanning forest, as edge-id bitmasks."""
    parent = [-1] * h.n
    parent_edge = [-1] * h.n
    depth = [0] * h.n
    seen = [False] * h.n
    tree = set()
    for s in range(h.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for u in h.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    parent_edge[u] = h.edge_id(u, v)
                    depth[u] = depth[v] + 1
                    tree.add(parent_edge[u])
                    stack.append(u)
    basis = []
    for e, (u, v) in enumerate(h.edges):
        if e in tree:
            continue
        mask = 1 << e
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            mask ^= 1 << parent_edge[a]
            a = parent[a]
        basis.append(mask)
    return basis


def even_subgraphs(h: Graph) -> Iterable[int]:
    """Every even edge set (cycle-space element) as a bitmask, Gray order."""
    basis = cycle_space_basis(h)
    cur = 0
    yield cur
    for i in range(1, 1 << len(basis)):
        cur ^= basis[(i & -i).bit_length() - 1]
        yield cur


def _star_cover(
    h: Graph, zverts: int, rest_edges: list[int], need: int, limit: int, counter: Budget
) -> Optional[dict[int, list[int]]]:
    """Fewest centres (fewer than ``limit``) covering ``rest_edges`` such that
    each centre x gets at least ``need - |N(x) & V(Z)|`` of them assigned.

    Only inclusion-minimal covers are tried: dropping a centre never takes
    an edge away from the others, so a feasible cover stays feasible.
    """
    if not rest_edges:
        return {}
    zdeg = {}

    def requirement(x: int) -> int:
        if x not in zdeg:
            zdeg[x] = max(0, need - bin(h.nbits(x) & zverts).count("1"))
        return zdeg[x]

    def assign(centres: list[int]) -> Optional[dict[int, list[int]]]:
        slots = [x for x in centres for _ in range(requirement(x))]
        if len(slots) > len(rest_edges):
            return None
        edge_of_slot: dict[int, int] = {}
        slot_of_edge: dict[int, int] = {}

        def augment(si: int, seen: set[int]) -> bool:
            x = slots[si]
            for e in rest_edges:
                if x in h.edge(e) and e not in seen:
                    seen.add(e)
                    if e not in slot_of_edge or augment(slot_of_edge[e], seen):
                        edge_of_slot[si] = e
                        slot_of_edge[e] = si
                        return True
            return False

        for si in range(len(slots)):
            if not augment(si, set()):
                return None
        out: dict[int, list[int]] = {x: [] for x in centres}
        cset = set(centres)
        for e in rest_edges:
            if e in slot_of_edge:
                out[slots[slot_of_edge[e]]].append(e)
            else:
                out[min(v for v in h.edge(e) if v in cset)].append(e)
        return out

    best: list = [None]

    def rec(centres: list[int], cset: set[int], bound: int) -> None:
        counter.tick()
        if len(centres) >= bound:
            return
        open_edge = next((e for e in rest_edges if not cset.intersection(h.edge(e))), None)
        if open_edge is None:
            got = assign(centres)
            if got is not None and (best[0] is None or len(got) < len(best[0])):
                best[0] = got
            return
        for x in h.edge(open_edge):
            centres.append(x)
            cset.add(x)
            cur_bound = bound if best[0] is None else min(bound, len(best[0]))
            rec(centres, cset, cur_bound)
            centres.pop()
            cset.discard(x)

    rec([], set(), limit)
    return best[0]


def _edge_mask_components(h: Graph, mask: int) -> list[list[int]]:
    return [sorted(c) for c in EdgeSubgraph(h, frozenset(bits_of(mask))).components()]


def min_system_exhaustive(
    h: Graph, mode: str = STRICT, budget: int | None = 10**7, upper: int | None = None
) -> Optional[tuple[DominatingSystem, int]]:
    """Minimum-cardinality dominating system by exhaustive search.

    Without loss of generality trails are vertex-disjoint (otherwise merge
    them), stars have distinct centres off the trails (otherwise merge or
    drop them). So a minimum system is an even subgraph Z whose components
    are the trails, plus stars covering the edges with no end in V(Z). All
    even subgraphs are enumerated from a cycle-space basis and the stars
    are found by a bounded vertex-cover search with an assignment check.

    ``upper`` restricts the search to systems with at most that many
    elements. Returns None when no system (within ``upper``) exists.
    """
    need = MIN_STAR[mode]
    counter = Budget(budget, "minimum dominating system")
    best: list = [None, None, None]  # cardinality, Z mask, star map
    cap = (upper + 1) if upper is not None else None
    for zmask in even_subgraphs(h):
        counter.tick()
        comps = _edge_mask_components(h, zmask) if zmask else []
        limit_total = best[0] if best[0] is not None else cap
        if limit_total is not None and len(comps) >= limit_total:
            continue
        zverts = 0
        for e in bits_of(zmask):
            u, v = h.edge(e)
            zverts |= (1 << u) | (1 << v)
        rest = [e for e, (u, v) in enumerate(h.edges) if not (zverts >> u) & 1 and not (zverts >> v) & 1]
        limit = (limit_total - len(comps)) if limit_total is not None else h.n + 1
        cover = _star_cover(h, zverts, rest, need, limit, counter)
        if cover is None:
            continue
        total = len(comps) + len(cover)
        if best[0] is None or total < best[0]:
            best = [total, zmask, cover]
            if total <= 1 and h.m > 0:
                break
    if best[0] is None:
        return None
    total, zmask, cover = best
    comps = _edge_mask_components(h, zmask) if zmask else []
    trails = tuple(ClosedTrail.from_edges(h, c) for c in comps)
    zverts = {v for c in comps for e in c for v in h.edge(e)}
    stars = []
    for x in sorted(cover):
        eids = set(cover[x])
        eids.update(h.edge_id(x, u) for u in h.neighbors(x) if u in zverts)
        stars.append(Star(x, frozenset(eids)))
    ds = DominatingSystem(h, trails, tuple(stars), mode)
    check = validate(ds)
    if not check:
        raise ReductionFailed(f"exhaustive search built an invalid system: {check.message}")
    return ds, total


def has_dominating_closed_trail(h: Graph) -> Optional[ClosedTrail]:
    """A closed trail with an end of every edge on it, or None.

    Single-vertex trails are not allowed. Among the candidates the one with
    fewest edges (then smallest sorted edge ids) is returned.
    """
    if any(h.degree(v) == 0 for v in range(h.n)):
        raise ValueError("graph has isolated vertices")
    best = None
    for zmask in even_subgraphs(h):
        if not zmask:
            continue
        eids = sorted(bits_of(zmask))
        sub = EdgeSubgraph(h, frozenset(eids))
        verts = sub.vertices()
        if any(u not in verts and v not in verts for u, v in h.edges):
            continue
        if not sub.is_connected():
            continue
        key = (len(eids), eids)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return ClosedTrail.from_edges(h, best[1])


def is_star_graph(h: Graph, min_edges: int = 3) -> bool:
    """True if all edges share one vertex and there are at least ``min_edges``."""
    if h.m < min_edges:
        return False
    return _common_vertex(h, list(range(h.m))) is not None


def greedy_star_system(h: Graph) -> DominatingSystem:
    """Relaxed system made of stars only: each vertex in turn takes all its
    still-uncovered edges."""
    left = set(range(h.m))
    stars = []
    for v in sorted(range(h.n), key=lambda x: (-h.degree(x), x)):
        mine = {e for e in h.incident_edges(v) if e in left}
        if mine:
            stars.append(Star(v, frozenset(mine)))
            left -= mine
    return DominatingSystem(h, (), tuple(stars), RELAXED)


def cycle_edge_counts(ds: DominatingSystem, c: Cycle) -> list[int]:
    """Number of edges of ``c`` inside each trail of ``ds``."""
    ce = set(c.edge_ids(ds.host))
    return [len(ce.intersection(t.edge_ids(ds.host))) for t in ds.trails]


__all__ = [
    "STRICT",
    "RELAXED",
    "Star",
    "DominatingSystem",
    "Validation",
    "validate",
    "system_to_two_factor",
    "system_to_parts",
    "two_factor_to_system",
    "min_system_exhaustive",
    "has_dominating_closed_trail",
    "is_star_graph",
    "greedy_star_system",
    "cycle_space_basis",
    "even_subgraphs",
    "cycle_edge_counts",
]
