from __future__ import annotations

import pytest

from clawfactor.closure import closure_graph
from clawfactor.corpus import connected_triangle_free
from clawfactor.degree import build_extremal, check_degree_condition, sigma_k
from clawfactor.domination import (
    RELAXED,
    STRICT,
    DominatingSystem,
    Star,
    min_system_exhaustive,
    two_factor_to_system,
    validate,
)
from clawfactor.errors import ClaimViolation, NoTwoFactor
from clawfactor.graph import ClosedTrail, Cycle, Graph, TwoFactor, cycle_graph, enumerate_cycles, girth
from clawfactor.linegraph import line_graph, root_graph
from clawfactor.matching import bipartite_matching_or_violator, is_hall_violator
from clawfactor.search import (
    Redirect,
    SigmaWitness,
    ViolationWitness,
    case1_move,
    case21_move,
    case22_witness,
    find_bounded_system,
    improve_by_cycle,
    is_normalized,
    no_improving_cycle,
    normalize,
    sigma_witness,
    star_leaf_bipartite,
)
from oracles import all_two_factors, violates_degree_condition


def trail(h: Graph, walk) -> ClosedTrail:
    t = ClosedTrail(tuple(walk))
    assert t.is_valid(h)
    return t


def ring(n: int, extra, n_total: int) -> Graph:
    return Graph(n_total, [(i, (i + 1) % n) for i in range(n)] + list(extra))


# ---------------------------------------------------------------------------
# normalize


def test_normalize_merges_figure_eight():
    h = Graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)])
    ds = DominatingSystem(h, (trail(h, (0, 1, 2, 3)), trail(h, (0, 4, 5, 6))))
    assert validate(ds)
    out = normalize(ds)
    assert out.cardinality == 1 and validate(out) and len(out.trails[0]) == 8


def test_normalize_merges_same_centre_stars():
    h = Graph(7, [(0, i) for i in range(1, 7)])
    ds = DominatingSystem(h, (), (Star.of(h, 0, [1, 2, 3]), Star.of(h, 0, [4, 5, 6])))
    out = normalize(ds)
    assert out.cardinality == 1 and validate(out) and len(out.stars[0]) == 6


def test_normalize_fixpoint():
    h = cycle_graph(5)
    ds = DominatingSystem(h, (trail(h, range(5)),))
    assert normalize(ds) == ds and is_normalized(ds)


def test_normalize_dissolves_star_on_trail():
    # 0..3 is a trail, vertex 0 also centres a star on fresh leaves
    h = Graph(7, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (0, 5), (0, 6)])
    ds = DominatingSystem(h, (trail(h, (0, 1, 2, 3)),), (Star.of(h, 0, [4, 5, 6]),))
    out = normalize(ds)
    assert out.cardinality == 1 and validate(out)
    assert out.objective() < ds.objective()


# ---------------------------------------------------------------------------
# improve_by_cycle


def two_squares() -> tuple[Graph, DominatingSystem]:
    h = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (2, 5), (1, 6)])
    return h, DominatingSystem(h, (trail(h, (0, 1, 2, 3)), trail(h, (4, 5, 6, 7))))


def test_improve_merges_two_trails():
    h, ds = two_squares()
    c = Cycle.of([1, 2, 5, 6])
    out = improve_by_cycle(ds, c)
    assert out is not None and out.cardinality == 1 and validate(out)
    assert len(out.trails[0]) == 8


def test_improve_inapplicable_on_own_trail():
    h = cycle_graph(5)
    ds = DominatingSystem(h, (trail(h, range(5)),))
    assert improve_by_cycle(ds, Cycle.of(range(5))) is None


def test_improve_absorbs_star():
    # trail 0..3; star at 5 = {51, 56, 57}; c = 0 1 5 6 uses one trail edge
    h = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 5), (5, 6), (6, 0), (5, 7)])
    ds = DominatingSystem(h, (trail(h, (0, 1, 2, 3)),), (Star.of(h, 5, [1, 6, 7]),))
    assert validate(ds)
    out = improve_by_cycle(ds, Cycle.of([0, 1, 5, 6]))
    assert out is not None and out.cardinality == 1 and out.stars == ()
    assert validate(out)


def test_improve_grows_coverage_at_equal_cardinality():
    h = ring(10, [(1, 5), (5, 8), (8, 0)], 10)
    ds = DominatingSystem(h, (trail(h, range(10)),))
    out = improve_by_cycle(ds, Cycle.of([0, 1, 5, 8]))
    assert out is not None and out.cardinality == 1
    assert len(out.covered_edges()) == 12 > len(ds.covered_edges())


def test_improve_touching_nothing():
    h, ds = two_squares()
    lone = Graph(12, list(h.edges) + [(8, 9), (9, 10), (10, 11), (11, 8)])
    ds = DominatingSystem(lone, ds.trails + (trail(lone, (8, 9, 10, 11)),))
    shifted = DominatingSystem(lone, ds.trails[:2])
    assert not validate(shifted)  # the lone square is undominated
    assert improve_by_cycle(shifted, Cycle.of([8, 9, 10, 11])) is None


# ---------------------------------------------------------------------------
# Case 1


def test_case1_returns_cycle():
    h = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5)])
    ds = DominatingSystem(h, (trail(h, (0, 1, 2, 3)), trail(h, (4, 5, 6, 7))))
    f = star_leaf_bipartite(ds)
    c = case1_move(ds, f, {})
    assert c is not None and c.is_valid(h)
    out = improve_by_cycle(ds, c)
    assert out is not None and out.cardinality == 1


def test_case1_single_trail_gives_none():
    h = cycle_graph(5)
    ds = DominatingSystem(h, (trail(h, range(5)),))
    assert case1_move(ds, star_leaf_bipartite(ds), {}) is None


def test_case1_forest_on_extremal_root():
    h = root_graph(closure_graph(build_extremal(1))).root
    ds, _ = min_system_exhaustive(h)
    ds = normalize(ds)
    f = star_leaf_bipartite(ds)
    cert = bipartite_matching_or_violator(f.graph, f.centers)
    assert cert.has_matching
    assert case1_move(ds, f, cert.mate) is None
    w = sigma_witness(ds, cert.mate, 1)
    assert w is not None and w.is_sound()
    assert sigma_k(line_graph(h).line, 2) < h.m


# ---------------------------------------------------------------------------
# Case 2


def k32_stars() -> DominatingSystem:
    # trail 0..11; centres 12, 13, 14 each joined to leaves 15, 16 and one trail vertex
    extra = [(12, 15), (12, 16), (13, 15), (13, 16), (14, 15), (14, 16), (12, 0), (13, 4), (14, 8)]
    h = ring(12, extra, 17)
    stars = tuple(Star.of(h, x, [15, 16, a]) for x, a in ((12, 0), (13, 4), (14, 8)))
    ds = DominatingSystem(h, (trail(h, range(12)),), stars)
    assert validate(ds)
    return ds


def test_case21_strict():
    ds = k32_stars()
    f = star_leaf_bipartite(ds)
    cert = bipartite_matching_or_violator(f.graph, f.centers)
    assert cert.violator == frozenset({12, 13, 14})
    out = case21_move(ds, f, cert.violator)
    assert out.cardinality == ds.cardinality - 1 and validate(out)
    assert sorted(s.center for s in out.stars) == [15, 16]


def test_case21_relaxed_pair():
    # S = {8, 9} share the single leaf 10, which also hangs off a third centre 11
    h = ring(8, [(8, 0), (8, 10), (9, 4), (9, 10), (11, 10), (11, 2)], 12)
    stars = (Star.of(h, 8, [0, 10]), Star.of(h, 9, [4, 10]), Star.of(h, 11, [2, 10]))
    ds = DominatingSystem(h, (trail(h, range(8)),), stars, RELAXED)
    assert validate(ds)
    f = star_leaf_bipartite(ds)
    s = {8, 9}
    assert is_hall_violator(f.graph, s)
    out = case21_move(ds, f, s)
    assert out.cardinality == ds.cardinality - 1 and validate(out)


def test_case21_precondition():
    h = ring(8, [(8, 0), (8, 10), (9, 4), (9, 10), (8, 2), (9, 6)], 11)
    ds = DominatingSystem(h, (trail(h, range(8)),), (Star.of(h, 8, [0, 2, 10]), Star.of(h, 9, [4, 6, 10])))
    f = star_leaf_bipartite(ds)
    with pytest.raises(ValueError):
        case21_move(ds, f, {8, 9})


def test_case21_claim_violation_carries_cycle():
    x1, x2, x3, t1, t2 = 12, 13, 14, 15, 16
    extra = [(x1, t1), (x1, x2), (x1, 0), (x2, t2), (x2, 4), (x2, 6), (x3, t1), (x3, t2), (x3, 8)]
    h = ring(12, extra, 17)
    stars = (Star.of(h, x1, [t1, x2, 0]), Star.of(h, x2, [t2, 4, 6]), Star.of(h, x3, [t1, t2, 8]))
    ds = DominatingSystem(h, (trail(h, range(12)),), stars)
    assert validate(ds)
    f = star_leaf_bipartite(ds)
    cert = bipartite_matching_or_violator(f.graph, f.centers)
    assert cert.violator == frozenset({x1, x2, x3})
    with pytest.raises(ClaimViolation) as info:
        case21_move(ds, f, cert.violator)
    cyc = info.value.cycle
    assert cyc.is_valid(h) and set(cyc.vertices) == {x1, x2, x3, t1, t2}
    assert improve_by_cycle(ds, cyc) is not None


def eight_ring_case() -> DominatingSystem:
    h = ring(8, [(8, 0), (8, 2), (9, 4), (9, 6), (8, 10), (9, 10)], 11)
    ds = DominatingSystem(h, (trail(h, range(8)),), (Star.of(h, 8, [0, 2, 10]), Star.of(h, 9, [4, 6, 10])))
    assert validate(ds)
    return ds


def test_case22_witness():
    ds = eight_ring_case()
    h = ds.host
    f = star_leaf_bipartite(ds)
    cert = bipartite_matching_or_violator(f.graph, f.centers)
    assert cert.violator == frozenset({8, 9})
    w = case22_witness(ds, f, cert.violator, 10)
    assert isinstance(w, ViolationWitness) and w.is_sound()
    assert len(w.matching) == w.p + w.q + 1 == h.degree(8) + h.degree(10) - 2
    corr = line_graph(h)
    assert not check_degree_condition(corr.line)[0]
    assert violates_degree_condition(corr.line, [corr.edge_to_vertex[e] for e in w.matching])
    # the driver reaches the same witness from this state
    res = find_bounded_system(h, 2, seed=ds)
    assert res.status == "witness" and isinstance(res.witness, ViolationWitness)


def test_case22_degree_one_redirect():
    x1, x2, x3, t, u = 12, 13, 14, 15, 16
    extra = [(x1, t), (x1, u), (x1, 0), (x2, t), (x2, 3), (x2, 5), (x3, t), (x3, 7), (x3, 9)]
    h = ring(12, extra, 17)
    stars = (Star.of(h, x1, [t, u, 0]), Star.of(h, x2, [t, 3, 5]), Star.of(h, x3, [t, 7, 9]))
    ds = DominatingSystem(h, (trail(h, range(12)),), stars)
    assert validate(ds)
    f = star_leaf_bipartite(ds)
    s = {x1, x2, x3}
    assert is_hall_violator(f.graph, s)
    out = case22_witness(ds, f, s, t)
    assert isinstance(out, Redirect) and out.kind == "violator"
    assert out.violator == frozenset({x2, x3})
    assert is_hall_violator(f.graph, out.violator)


def test_case22_uw_edge_redirect():
    w, z = 11, 12
    h = ring(8, [(8, 0), (8, 2), (9, 4), (9, 6), (8, 10), (9, 10), (w, 10), (w, 0), (w, z)], 13)
    stars = (Star.of(h, 8, [0, 2, 10]), Star.of(h, 9, [4, 6, 10]), Star.of(h, w, [10, 0, z]))
    ds = DominatingSystem(h, (trail(h, range(8)),), stars)
    assert validate(ds)
    f = star_leaf_bipartite(ds)
    out = case22_witness(ds, f, {8, 9}, 10)
    assert isinstance(out, Redirect) and out.kind == "cycle"
    assert set(out.cycle.vertices) == {8, 10, w, 0}
    assert improve_by_cycle(ds, out.cycle) is not None


# ---------------------------------------------------------------------------
# driver


def test_c5_immediate():
    res = find_bounded_system(cycle_graph(5), 1)
    assert res.status == "system" and res.system.cardinality == 1 and res.moves == []


@pytest.mark.parametrize("k", [1, 2, 3])
def test_extremal_roots(k):
    h = root_graph(closure_graph(build_extremal(k))).root
    res = find_bounded_system(h, k)
    assert res.status in ("witness", "exceeds")
    if res.status == "witness":
        assert res.witness.is_sound()
    assert min_system_exhaustive(h, upper=k) is None
    assert min_system_exhaustive(h)[1] == k + 1
    assert find_bounded_system(h, k + 1).system.cardinality <= k + 1


def test_no_two_factor():
    h = Graph(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(NoTwoFactor):
        find_bounded_system(h, 1)
    res = find_bounded_system(h, 2, mode=RELAXED)
    assert res.status == "system" and res.system.cardinality <= 2


def test_rejects_triangle():
    with pytest.raises(ValueError):
        find_bounded_system(Graph(3, [(0, 1), (1, 2), (0, 2)]), 1)


def check_run(h: Graph, k: int, res, exact) -> None:
    obj = res.objectives
    assert all(b < a for a, b in zip(obj, obj[1:])), obj
    for w in res.witnesses:
        assert w.is_sound()
        lg = line_graph(h).line
        if isinstance(w, ViolationWitness):
            assert not check_degree_condition(lg)[0]
        else:
            assert isinstance(w, SigmaWitness) and sigma_k(lg, k + 1) < lg.n
    if res.status == "system":
        assert validate(res.system) and res.system.cardinality <= k
        assert exact is not None and exact <= k
    elif res.status == "exceeds":
        assert res.minimum == exact and (exact is None or exact > k)


def test_all_seeds_small_corpus():
    """Every 2-factor of L(h) as a seed: monotone, valid, sound, and the
    stall state satisfies the cycle property up to the cap."""
    for h in connected_triangle_free(7):
        corr = line_graph(h)
        exact = min_system_exhaustive(h)
        exact = exact[1] if exact else None
        cap = (girth(h) or 0) + 4
        cycles = list(enumerate_cycles(h, cap))
        for edges in all_two_factors(corr.line, limit=25):
            seed = two_factor_to_system(TwoFactor.from_edges(corr.line, edges), corr)
            for k in (1, 2, 3):
                res = find_bounded_system(h, k, seed=seed, stop_at_witness=False)
                check_run(h, k, res, exact)
                stalled = find_bounded_system(h, k, seed=seed, fallback=False, stop_at_witness=False)
                if stalled.status == "stalled":
                    assert no_improving_cycle(stalled.system, cycles)
                    assert is_normalized(stalled.system)


def test_agreement_with_exhaustive_up_to_eight_edges():
    for h in connected_triangle_free(8):
        found = min_system_exhaustive(h)
        if found is None:
            continue
        exact = found[1]
        res = find_bounded_system(h, exact, stop_at_witness=False)
        assert res.status == "system" and res.system.cardinality == exact
        if exact > 1:
            res = find_bounded_system(h, exact - 1, stop_at_witness=False)
            assert res.status == "exceeds" and res.minimum == exact


def test_mode_is_respected():
    h = cycle_graph(6)
    res = find_bounded_system(h, 1, mode=RELAXED)
    assert res.system.mode == RELAXED and res.system.cardinality == 1
    res = find_bounded_system(h, 1, mode=STRICT)
    assert res.system.mode == STRICT
