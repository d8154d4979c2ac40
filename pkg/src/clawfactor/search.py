"""Improvement moves on dominating systems and witness extraction.

A system is improved lexicographically: first fewer elements, then more
covered edges. The moves:

* ``normalize``: merge trails sharing a vertex, merge stars sharing a
  centre, drop stars centred on a trail.
* ``improve_by_cycle``: a host cycle meeting every trail in at most one edge
  is combined with the trails it touches into one closed trail, absorbing
  the stars centred on it.
* Star/leaf bipartite graph F (centres X, private leaves T). If F matches X
  (``case1_move``) the matched edges plus one edge per trail span a graph
  that must contain such a cycle unless sigma_{k+1} < n. Otherwise a minimal
  Hall violator S either lets every leaf t in N_F(S) with at least three
  neighbours in S become a new star centre (``case21_move``), or some leaf
  has at most two and ``case22_witness`` builds a matching N of the root
  graph that is an independent set of the line graph with |N| >= delta(N).

``find_bounded_system`` drives the moves and falls back to the exhaustive
search when they stall above the target.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .domination import (
    MIN_STAR,
    RELAXED,
    STRICT,
    DominatingSystem,
    Star,
    greedy_star_system,
    min_system_exhaustive,
    two_factor_to_system,
    validate,
)
from .errors import ClaimViolation, NoTwoFactor
from .graph import ClosedTrail, Cycle, EdgeSubgraph, Graph, enumerate_cycles, girth, is_triangle_free
from .linegraph import line_graph
from .matching import bipartite_matching_or_violator, is_hall_violator, neighbourhood, two_factor

log = logging.getLogger(__name__)


def line_degree(h: Graph, e: int) -> int:
    """Degree of edge ``e`` of h as a vertex of L(h)."""
    u, v = h.edge(e)
    return h.degree(u) + h.degree(v) - 2


# ---------------------------------------------------------------------------
# Witness types


@dataclass(frozen=True)
class ViolationWitness:
    """Matching N of H (an independent set of L(H)) with |N| >= delta(N)."""

    host: Graph
    x: int
    t: int
    U: tuple[int, ...]
    W: tuple[int, ...]
    phi: tuple[tuple[int, int], ...]
    matching: tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.U)

    @property
    def q(self) -> int:
        return len(self.W)

    def is_sound(self) -> bool:
        h = self.host
        seen: set[int] = set()
        for e in self.matching:
            u, v = h.edge(e)
            if u in seen or v in seen:
                return False
            seen.update((u, v))
        if not self.matching:
            return False
        return len(self.matching) >= min(line_degree(h, e) for e in self.matching)

    def to_json(self) -> dict:
        h = self.host
        return {
            "kind": "degree-condition",
            "x": self.x,
            "t": self.t,
            "U": list(self.U),
            "W": list(self.W),
            "phi": [list(pair) for pair in self.phi],
            "matching": [list(h.edge(e)) for e in self.matching],
            "size": len(self.matching),
            "line_degree_xt": line_degree(h, h.edge_id(self.x, self.t)),
        }


@dataclass(frozen=True)
class SigmaWitness:
    """k+1 pairwise disjoint edges of H whose line-graph degrees sum below
    |L(H)| = |E(H)|."""

    host: Graph
    edges: tuple[int, ...]

    @property
    def degree_sum(self) -> int:
        return sum(line_degree(self.host, e) for e in self.edges)

    def is_sound(self) -> bool:
        seen: set[int] = set()
        for e in self.edges:
            u, v = self.host.edge(e)
            if u in seen or v in seen:
                return False
            seen.update((u, v))
        return self.degree_sum < self.host.m

    def to_json(self) -> dict:
        return {
            "kind": "sigma",
            "edges": [list(self.host.edge(e)) for e in self.edges],
            "degree_sum": self.degree_sum,
            "order": self.host.m,
        }


Witness = Union[ViolationWitness, SigmaWitness]

_witness_listeners: list[Callable[[Witness], None]] = []


def add_witness_listener(fn: Callable[[Witness], None]) -> None:
    """Call ``fn`` with every witness that ``find_bounded_system`` emits."""
    _witness_listeners.append(fn)


def remove_witness_listener(fn: Callable[[Witness], None]) -> None:
    _witness_listeners.remove(fn)


def _announce(w: Witness) -> None:
    for fn in list(_witness_listeners):
        fn(w)


# ---------------------------------------------------------------------------
# Normalisation and the cycle move


def _merge_trails(h: Graph, a: ClosedTrail, b: ClosedTrail) -> ClosedTrail:
    eids = set(a.edge_ids(h)) | set(b.edge_ids(h))
    return ClosedTrail.from_edges(h, eids, a.walk[0])


def normalize_once(ds: DominatingSystem) -> tuple[Optional[DominatingSystem], str]:
    """Apply one repair of properties (a), (b), (c); None when normalised."""
    h = ds.host
    trails = list(ds.trails)
    for i in range(len(trails)):
        vi = trails[i].vertices()
        for j in range(i + 1, len(trails)):
            if vi & trails[j].vertices():
                merged = _merge_trails(h, trails[i], trails[j])
                trails[i] = merged
                del trails[j]
                return ds.replace(trails=trails), f"merge trails {i},{j}"
    stars = list(ds.stars)
    by_center: dict[int, int] = {}
    for i, s in enumerate(stars):
        if s.center in by_center:
            j = by_center[s.center]
            stars[j] = Star(s.center, stars[j].edges | s.edges)
            del stars[i]
            return ds.replace(stars=stars), f"merge stars at {s.center}"
        by_center[s.center] = i
    on_trail = ds.trail_vertices()
    for i, s in enumerate(stars):
        if s.center in on_trail:
            del stars[i]
            return ds.replace(stars=stars), f"dissolve star at {s.center}"
    return None, ""


def normalize(ds: DominatingSystem) -> DominatingSystem:
    """Repair (a) vertex-disjoint trails, (b) distinct star centres and
    (c) no star centre on a trail; every repair lowers the element count."""
    while True:
        nxt, _ = normalize_once(ds)
        if nxt is None:
            return ds
        ds = nxt


def is_normalized(ds: DominatingSystem) -> bool:
    return normalize_once(ds)[0] is None


def trail_hits(ds: DominatingSystem, c: Cycle) -> list[int]:
    ce = set(c.edge_ids(ds.host))
    return [len(ce.intersection(t.edge_ids(ds.host))) for t in ds.trails]


def cycle_is_improving(ds: DominatingSystem, c: Cycle) -> bool:
    """True if c shares at most one edge with every trail."""
    return all(x <= 1 for x in trail_hits(ds, c))


def improve_by_cycle(ds: DominatingSystem, c: Cycle) -> Optional[DominatingSystem]:
    """Replace the elements touched by ``c`` with one closed trail.

    Touched elements are the trails meeting V(c) and the stars centred on
    V(c). The new trail has edge set E(c) xor (edges of touched trails).
    Returns None when ``c`` meets some trail in two or more edges, touches
    nothing, or the result is not a strict improvement.
    """
    h = ds.host
    if not cycle_is_improving(ds, c):
        return None
    cv = set(c.vertices)
    touched_trails = [i for i, t in enumerate(ds.trails) if t.vertices() & cv]
    touched_stars = [i for i, s in enumerate(ds.stars) if s.center in cv]
    if not touched_trails and not touched_stars:
        return None
    new_edges = set(c.edge_ids(h))
    for i in touched_trails:
        new_edges ^= set(ds.trails[i].edge_ids(h))
    if not EdgeSubgraph(h, frozenset(new_edges)).is_closed_trail():
        return None
    merged = ClosedTrail.from_edges(h, new_edges)
    trails = [t for i, t in enumerate(ds.trails) if i not in touched_trails] + [merged]
    stars = [s for i, s in enumerate(ds.stars) if i not in touched_stars]
    out = ds.replace(trails=trails, stars=stars)
    if not validate(out) or not out.objective() < ds.objective():
        return None
    return out


# ---------------------------------------------------------------------------
# The star/leaf bipartite graph


@dataclass(frozen=True)
class StarLeafBipartite:
    """F: centres X, leaves T (star leaves off the trails and not centres),
    and the edges joining each centre to its own leaves in T."""

    host: Graph
    centers: tuple[int, ...]
    leaves: tuple[int, ...]
    graph: Graph  # on the host vertex ids, only F edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.graph.neighbors(v)

    def nbhd(self, vertices) -> set[int]:
        return neighbourhood(self.graph, vertices)


def star_leaf_bipartite(ds: DominatingSystem) -> StarLeafBipartite:
    h = ds.host
    centers = ds.centers()
    blocked = ds.trail_vertices() | set(centers)
    edges = []
    leaves: set[int] = set()
    for s in ds.stars:
        for t in s.leaves(h):
            if t not in blocked:
                leaves.add(t)
                edges.append((s.center, t))
    return StarLeafBipartite(h, tuple(sorted(centers)), tuple(sorted(leaves)), Graph(h.n, edges))


# ---------------------------------------------------------------------------
# Case 1


def _extended_matching(ds: DominatingSystem, mate: dict[int, int]) -> list[int]:
    h = ds.host
    out = [h.edge_id(x, t) for x, t in sorted(mate.items())]
    out.extend(min(t.edge_ids(h)) for t in ds.trails)
    return out


def case1_move(ds: DominatingSystem, f: StarLeafBipartite, mate: dict[int, int]) -> Optional[Cycle]:
    """Cycle of H[V(M')] meeting each trail in at most one edge, or None.

    M' is the F-matching plus the smallest edge of each trail; None means
    H[V(M')] is a forest, which forces a sigma violation.
    """
    h = ds.host
    mprime = _extended_matching(ds, mate)
    verts = h.edge_subgraph_vertices(mprime)
    sub, back = h.induced(verts)
    parent = list(range(sub.n))
    tree_adj: dict[int, list[int]] = {v: [] for v in range(sub.n)}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in sub.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree_adj[a].append(b)
            tree_adj[b].append(a)
            continue
        # a-b closes a cycle with the forest path between them
        prev = {a: -1}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            for u in tree_adj[v]:
                if u not in prev:
                    prev[u] = v
                    queue.append(u)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        cyc = Cycle.of([back[v] for v in path])
        if cycle_is_improving(ds, cyc):
            return cyc
        log.warning("case 1 cycle %s meets a trail twice", cyc.vertices)
        return None
    return None


def sigma_witness(ds: DominatingSystem, mate: dict[int, int], k: int) -> Optional[SigmaWitness]:
    """k+1 edges of M' with line-degree sum below |E(H)|, when they exist."""
    h = ds.host
    mprime = sorted(_extended_matching(ds, mate), key=lambda e: (line_degree(h, e), e))
    if len(mprime) < k + 1:
        return None
    w = SigmaWitness(h, tuple(sorted(mprime[: k + 1])))
    return w if w.is_sound() else None


# ---------------------------------------------------------------------------
# Case 2


def _f_path(f: StarLeafBipartite, a: int, b: int) -> Optional[list[int]]:
    prev = {a: -1}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            path = [b]
            while path[-1] != a:
                path.append(prev[path[-1]])
            return path[::-1]
        for u in f.neighbors(v):
            if u not in prev:
                prev[u] = v
                queue.append(u)
    return None


def check_violator_independent(ds: DominatingSystem, f: StarLeafBipartite, s) -> None:
    """Raise ClaimViolation with a cycle of star edges if S is not
    independent in the host."""
    h = ds.host
    ss = sorted(s)
    for i, a in enumerate(ss):
        for b in ss[i + 1 :]:
            if h.has_edge(a, b):
                path = _f_path(f, a, b)
                if path is None:
                    raise RuntimeError("violator is not minimal: centres split into two violators")
                raise ClaimViolation(f"adjacent centres {a},{b} in the violator", Cycle.of(path))


def case21_move(ds: DominatingSystem, f: StarLeafBipartite, s) -> DominatingSystem:
    """Replace the stars centred in S by stars centred at the leaves N_F(S)."""
    h = ds.host
    s = set(s)
    check_violator_independent(ds, f, s)
    need = MIN_STAR[ds.mode]
    nf = sorted(f.nbhd(s))
    for t in nf:
        if len(set(f.neighbors(t)) & s) < need:
            raise ValueError(f"leaf {t} has fewer than {need} neighbours in S")
    stars = []
    for st in ds.stars:
        if st.center in s:
            continue
        extra = {h.edge_id(st.center, y) for y in h.neighbors(st.center) if y in s}
        stars.append(Star(st.center, st.edges | extra))
    for t in nf:
        stars.append(Star(t, frozenset(h.edge_id(t, y) for y in f.neighbors(t) if y in s)))
    out = ds.replace(stars=stars)
    check = validate(out)
    if not check:
        raise RuntimeError(f"case 2-1 produced an invalid system: {check.message}")
    if not out.objective() < ds.objective():
        raise RuntimeError("case 2-1 did not lower the element count")
    return out


@dataclass(frozen=True)
class Redirect:
    """Outcome of a failed structural check in Case 2-2.

    ``kind`` is ``"cycle"`` (an improving cycle), ``"violator"`` (a smaller
    Hall violator), ``"system"`` (an already improved system) or ``"stall"``.
    """

    kind: str
    cycle: Optional[Cycle] = None
    violator: Optional[frozenset[int]] = None
    system: Optional[DominatingSystem] = None
    reason: str = ""


def case22_witness(
    ds: DominatingSystem, f: StarLeafBipartite, s, t: int
) -> Union[ViolationWitness, Redirect]:
    """Build the matching N = {xt} + {v phi(v)} or redirect to a move."""
    h = ds.host
    s = set(s)
    x = min(set(f.neighbors(t)) & s)
    star_x = next(st for st in ds.stars if st.center == x)
    U = sorted(set(h.neighbors(x)) - {t})
    W = sorted(set(h.neighbors(t)) - s)

    # neighbours of x other than t must have degree >= 2
    for u in U:
        if h.degree(u) == 1:
            smaller = frozenset(s - {x})
            if is_hall_violator(f.graph, smaller):
                return Redirect("violator", violator=smaller, reason=f"leaf {u} of degree 1")
            return Redirect("stall", reason=f"degree-1 neighbour {u} without smaller violator")
    for w in W:
        if h.degree(w) < 2:
            return Redirect("stall", reason=f"neighbour {w} of t has degree 1")

    # no edge may join U and W
    for u in U:
        for w in W:
            if h.has_edge(u, w):
                cyc = Cycle.of([t, x, u, w])
                if cycle_is_improving(ds, cyc):
                    return Redirect("cycle", cycle=cyc, reason=f"edge {u}-{w} between U and W")
                return Redirect("stall", reason=f"U-W edge {u}-{w} but 4-cycle meets a trail twice")

    trail_of: dict[int, ClosedTrail] = {}
    for tr in ds.trails:
        for v in tr.walk:
            trail_of.setdefault(v, tr)
    phi: dict[int, int] = {}
    for v in U + W:
        if v in trail_of:
            phi[v] = trail_of[v].successor(v)
        else:
            phi[v] = min(y for y in h.neighbors(v) if y not in (x, t))
        if phi[v] in (x, t):
            return Redirect("stall", reason=f"phi({v}) hits x or t")

    # phi must be injective
    by_image: dict[int, int] = {}
    for v in U + W:
        y = phi[v]
        if y in by_image:
            return _phi_collision(ds, star_x, x, t, set(U), by_image[y], v, y)
        by_image[y] = v
    if set(phi.values()) & (set(U) | set(W)):
        return Redirect("stall", reason="phi image meets U or W")

    n_edges = [h.edge_id(x, t)] + [h.edge_id(v, phi[v]) for v in U + W]
    wit = ViolationWitness(
        host=h,
        x=x,
        t=t,
        U=tuple(U),
        W=tuple(W),
        phi=tuple(sorted(phi.items())),
        matching=tuple(n_edges),
    )
    if not wit.is_sound():
        return Redirect("stall", reason="constructed N is not a violating independent set")
    return wit


def _phi_collision(
    ds: DominatingSystem, star_x: Star, x: int, t: int, U: set[int], v1: int, v2: int, y: int
) -> Redirect:
    h = ds.host
    if v1 in U and v2 in U:
        path = [v1, x, v2]
    elif v1 not in U and v2 not in U:
        path = [v1, t, v2]
    else:
        u, w = (v1, v2) if v1 in U else (v2, v1)
        path = [u, x, t, w]
    cyc = Cycle.of(path + [y])
    if cycle_is_improving(ds, cyc):
        return Redirect("cycle", cycle=cyc, reason=f"phi({v1}) = phi({v2}) = {y}")
    e1, e2 = h.edge_id(v1, y), h.edge_id(v2, y)
    owner = next((i for i, tr in enumerate(ds.trails) if {e1, e2} <= set(tr.edge_ids(h))), None)
    if owner is None:
        return Redirect("stall", reason="phi collision edges not on one trail")
    new_edges = set(ds.trails[owner].edge_ids(h)) ^ set(cyc.edge_ids(h))
    if not EdgeSubgraph(h, frozenset(new_edges)).is_closed_trail():
        return Redirect("stall", reason="phi collision: symmetric difference is not a closed trail")
    merged = ClosedTrail.from_edges(h, new_edges)
    trails = [tr for i, tr in enumerate(ds.trails) if i != owner] + [merged]
    # as in the argument: drop the star at x and the trail, add the new trail
    others = [st for st in ds.stars if st.center != x]
    candidate = ds.replace(trails=trails, stars=others)
    if validate(candidate) and candidate.objective() < ds.objective():
        return Redirect("system", system=candidate, reason=f"phi collision at {y}, star at {x} absorbed")
    # keep the star (minus edges now on the trail) when x is not on the new trail
    kept = Star(x, star_x.edges - new_edges)
    candidate = ds.replace(trails=trails, stars=others + ([kept] if kept.edges else []))
    if validate(candidate) and candidate.objective() < ds.objective():
        return Redirect("system", system=candidate, reason=f"phi collision at {y}")
    return Redirect("stall", reason=f"phi collision at {y} gives no improving system")


# ---------------------------------------------------------------------------
# Driver


@dataclass
class BoundedResult:
    """Outcome of ``find_bounded_system``.

    ``status`` is ``"system"`` (``system`` has at most k elements),
    ``"witness"`` (``witness`` disproves a hypothesis) or ``"exceeds"``
    (exhaustive search shows every system has ``minimum`` > k elements).
    With ``fallback=False`` a run whose moves run dry ends as ``"stalled"``,
    keeping the last system and ``stall_reason``.
    """

    status: str
    k: int
    system: Optional[DominatingSystem] = None
    witness: Optional[Witness] = None
    witnesses: list[Witness] = field(default_factory=list)
    minimum: Optional[int] = None
    objectives: list[tuple[int, int]] = field(default_factory=list)
    moves: list[str] = field(default_factory=list)
    stalled: bool = False
    stall_reason: str = ""
    used_fallback: bool = False


def seed_system(h: Graph, mode: str = STRICT) -> DominatingSystem:
    """Starting system: pulled back from a 2-factor of L(h) (strict mode),
    or all stars when no 2-factor exists (relaxed mode only)."""
    if h.m == 0:
        return DominatingSystem(h, (), (), mode)
    corr = line_graph(h)
    tf = two_factor(corr.line)
    if tf is None:
        if mode == STRICT:
            raise NoTwoFactor("the line graph has no 2-factor")
        return greedy_star_system(h)
    ds = two_factor_to_system(tf, corr)
    return ds if mode == STRICT else DominatingSystem(h, ds.trails, ds.stars, mode)


def find_bounded_system(
    h: Graph,
    k: int,
    budget: int | None = 10**7,
    mode: str = STRICT,
    cycle_cap: int | None = None,
    fallback: bool = True,
    seed: DominatingSystem | None = None,
    stop_at_witness: bool = True,
) -> BoundedResult:
    """Search for a dominating system of ``h`` with at most ``k`` elements.

    A witness ends the search unless ``stop_at_witness`` is false; then it
    is recorded in ``witnesses`` and the search continues as after a stall.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if not is_triangle_free(h):
        raise ValueError("host must be triangle-free")
    ds = seed if seed is not None else seed_system(h, mode)
    if ds.mode != mode:
        ds = DominatingSystem(h, ds.trails, ds.stars, mode)
    result = BoundedResult(status="system", k=k)
    result.objectives.append(ds.objective())

    def accept(new: DominatingSystem, label: str) -> None:
        nonlocal ds
        if not validate(new):
            raise RuntimeError(f"move {label} produced an invalid system")
        if not new.objective() < ds.objective():
            raise RuntimeError(f"move {label} did not improve the objective")
        ds = new
        result.objectives.append(ds.objective())
        result.moves.append(label)

    gth = girth(h)
    cap = cycle_cap if cycle_cap is not None else (gth + 4 if gth is not None else 0)
    cycles = sorted(enumerate_cycles(h, cap), key=lambda c: (len(c), c.vertices)) if cap >= 3 else []

    while True:
        while True:
            nxt, label = normalize_once(ds)
            if nxt is None:
                break
            accept(nxt, label)
        if ds.cardinality <= k:
            result.system = ds
            return result

        improved = None
        for c in cycles:
            if cycle_is_improving(ds, c):
                improved = improve_by_cycle(ds, c)
                if improved is not None:
                    accept(improved, f"cycle {c.vertices}")
                    break
        if improved is not None:
            continue

        f = star_leaf_bipartite(ds)
        cert = bipartite_matching_or_violator(f.graph, f.centers)
        if cert.has_matching:
            cyc = case1_move(ds, f, cert.mate or {})
            if cyc is not None:
                nxt = improve_by_cycle(ds, cyc)
                if nxt is not None:
                    accept(nxt, f"case 1 cycle {cyc.vertices}")
                    continue
                result.stall_reason = "case 1 cycle did not improve"
            else:
                wit = sigma_witness(ds, cert.mate or {}, k)
                if wit is not None:
                    _announce(wit)
                    result.witnesses.append(wit)
                    if stop_at_witness:
                        result.status = "witness"
                        result.witness = wit
                        return result
                    result.stall_reason = "sigma witness"
                else:
                    result.stall_reason = "case 1 forest without sigma witness"
        else:
            outcome = _case2(ds, f, set(cert.violator or ()), k)
            if isinstance(outcome, DominatingSystem):
                accept(outcome, result_label(outcome, ds))
                continue
            if isinstance(outcome, ViolationWitness):
                _announce(outcome)
                result.witnesses.append(outcome)
                if stop_at_witness:
                    result.status = "witness"
                    result.witness = outcome
                    return result
                result.stall_reason = "degree-condition witness"
            else:
                result.stall_reason = outcome

        # stalled above k: the cheap moves found nothing
        result.stalled = True
        log.info("moves stalled at %s: %s", ds.objective(), result.stall_reason)
        if not fallback:
            result.status = "stalled"
            result.system = ds
            return result
        result.used_fallback = True
        found = min_system_exhaustive(h, mode, budget, upper=k)
        if found is not None:
            result.system = found[0]
            result.objectives.append(found[0].objective())
            result.moves.append("exhaustive fallback")
            return result
        exact = min_system_exhaustive(h, mode, budget)
        result.status = "exceeds"
        result.system = ds
        result.minimum = exact[1] if exact is not None else None
        return result


def result_label(new: DominatingSystem, old: DominatingSystem) -> str:
    return f"case 2 move {old.cardinality}->{new.cardinality}"


def _case2(ds: DominatingSystem, f: StarLeafBipartite, s: set[int], k: int):
    """Dispatch on a Hall violator; returns a system, a witness or a stall
    reason string."""
    for _ in range(len(s) + 1):
        try:
            check_violator_independent(ds, f, s)
        except ClaimViolation as exc:
            nxt = improve_by_cycle(ds, exc.cycle)
            return nxt if nxt is not None else "cycle between violator centres did not improve"
        need = MIN_STAR[ds.mode]
        nf = sorted(f.nbhd(s))
        small = [t for t in nf if len(set(f.neighbors(t)) & s) < need]
        if not small:
            return case21_move(ds, f, s)
        out = case22_witness(ds, f, s, small[0])
        if isinstance(out, ViolationWitness):
            return out
        if out.kind == "cycle":
            nxt = improve_by_cycle(ds, out.cycle)
            return nxt if nxt is not None else "redirect cycle did not improve"
        if out.kind == "system":
            return out.system
        if out.kind == "violator":
            s = _shrink(f, set(out.violator or ()))
            continue
        return out.reason
    return "violator redirects did not converge"


def _shrink(f: StarLeafBipartite, s: set[int]) -> set[int]:
    """Inclusion-minimal violator inside ``s``."""
    sub_nodes = sorted(s)
    cert = bipartite_matching_or_violator(
        Graph(f.graph.n, [e for e in f.graph.edges if e[0] in s or e[1] in s]), sub_nodes
    )
    return set(cert.violator) if cert.violator is not None else s


def no_improving_cycle(ds: DominatingSystem, cycles) -> bool:
    """Every given cycle has at least two edges in some single trail."""
    return all(any(x >= 2 for x in trail_hits(ds, c)) for c in cycles)
