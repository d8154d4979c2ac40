"""Exact evaluation of the degree hypotheses and the sharpness family G_k."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import Budget
from .graph import Graph, bits_of, complete_graph

INF = math.inf
DEFAULT_BUDGET = 10**7


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _independent_search(g: Graph, cand: int, target: int | None, budget: Budget) -> int:
    """Largest independent subset of ``cand`` (bitset).

    With ``target`` set, returns as soon as a set of that size is found.
    """
    best = 0
    best_size = 0

    def rec(chosen: int, size: int, cand: int) -> bool:
        nonlocal best, best_size
        budget.tick()
        # vertices with no neighbour left in cand are always taken
        free = 0
        for v in bits_of(cand):
            if not g.nbits(v) & cand:
                free |= 1 << v
        if free:
            chosen |= free
            size += _popcount(free)
            cand &= ~free
        if size > best_size:
            best, best_size = chosen, size
            if target is not None and best_size >= target:
                return True
        if not cand or size + _popcount(cand) <= best_size:
            return False
        # branch on a vertex of maximum degree inside cand
        v = max(bits_of(cand), key=lambda x: (_popcount(g.nbits(x) & cand), -x))
        if rec(chosen | (1 << v), size + 1, cand & ~g.nbits(v) & ~(1 << v)):
            return True
        return rec(chosen, size, cand & ~(1 << v))

    rec(0, 0, cand)
    return best


def maximum_independent_set(g: Graph, budget: int | None = DEFAULT_BUDGET) -> set[int]:
    return set(bits_of(_independent_search(g, g.full_mask(), None, Budget(budget, "independence number"))))


def independence_number(g: Graph, budget: int | None = DEFAULT_BUDGET) -> int:
    """Exact alpha(G) by branch and bound on bitsets."""
    return len(maximum_independent_set(g, budget))


def is_independent(g: Graph, vertices) -> bool:
    vs = list(vertices)
    mask = 0
    for v in vs:
        mask |= 1 << v
    return all(not (g.nbits(v) & mask) for v in vs)


def min_degree_sum_set(g: Graph, k: int, budget: int | None = DEFAULT_BUDGET) -> tuple[float, Optional[list[int]]]:
    """sigma_k together with an independent set attaining it."""
    if k < 1:
        raise ValueError("k must be positive")
    counter = Budget(budget, f"sigma_{k}")
    order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    deg = [g.degree(v) for v in order]
    pos_bit = [1 << v for v in order]
    best: float = INF
    best_set: Optional[list[int]] = None
    chosen: list[int] = []

    def rec(start: int, total: int, blocked: int) -> None:
        nonlocal best, best_set
        counter.tick()
        need = k - len(chosen)
        if need == 0:
            if total < best:
                best, best_set = total, list(chosen)
            return
        # degrees are ascending, so the next `need` free candidates bound the sum
        bound = total
        seen = 0
        for i in range(start, len(order)):
            if not blocked & pos_bit[i]:
                bound += deg[i]
                seen += 1
                if seen == need:
                    break
        if seen < need or bound >= best:
            return
        for i in range(start, len(order)):
            if blocked & pos_bit[i]:
                continue
            if total + deg[i] * need >= best:
                break
            v = order[i]
            chosen.append(v)
            rec(i + 1, total + deg[i], blocked | g.nbits(v))
            chosen.pop()

    rec(0, 0, 0)
    return best, (sorted(best_set) if best_set is not None else None)


def sigma_k(g: Graph, k: int, budget: int | None = DEFAULT_BUDGET) -> float:
    """Minimum degree sum over independent sets of order k; ``INF`` when
    alpha(G) < k."""
    return min_degree_sum_set(g, k, budget)[0]


def check_degree_condition(g: Graph, budget: int | None = DEFAULT_BUDGET) -> tuple[bool, Optional[set[int]]]:
    """Test whether every independent set I has |I| <= delta_G(I) - 1.

    The condition fails exactly when some vertex v lies in an independent
    set of size d(v); equivalently G - N[v] holds an independent set of size
    d(v) - 1. Returns ``(True, None)`` or ``(False, I)``.
    """
    counter = Budget(budget, "degree condition")
    for v in sorted(range(g.n), key=lambda x: (g.degree(x), x)):
        need = g.degree(v) - 1
        if need <= 0:
            return False, {v}
        rest = g.full_mask() & ~g.nbits(v) & ~(1 << v)
        if _popcount(rest) < need:
            continue
        found = _independent_search(g, rest, need, counter)
        if _popcount(found) >= need:
            chosen = sorted(bits_of(found))[:need]
            return False, {v, *chosen}
    return True, None


def build_extremal(k: int) -> Graph:
    """The sharpness graph G_k.

    Vertices ``0..k+2`` form the clique H_0 (``v_i`` is vertex ``i-1``);
    each of the k further cliques H_i of order k+2 is joined completely to
    ``v_i``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    edges = list(complete_graph(k + 3).edges)
    for i in range(1, k + 1):
        base = k + 3 + (i - 1) * (k + 2)
        block = range(base, base + k + 2)
        edges.extend((a, b) for a in block for b in block if a < b)
        edges.extend((i - 1, a) for a in block)
    return Graph(k * k + 3 * k + 3, edges)


def extremal_cut_vertices(k: int) -> list[int]:
    """The vertices v_1..v_k of G_k."""
    return list(range(k))


@dataclass
class HypothesisReport:
    k: int
    n: int
    sigma_value: float
    sigma_ok: bool
    degree_condition_ok: bool
    alpha: int
    min_degree: int
    violating_set: Optional[list[int]] = None
    sigma_set: Optional[list[int]] = field(default=None)

    @property
    def ok(self) -> bool:
        return self.sigma_ok and self.degree_condition_ok

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "sigma_value": "inf" if self.sigma_value == INF else int(self.sigma_value),
            "sigma_ok": self.sigma_ok,
            "degree_condition_ok": self.degree_condition_ok,
            "violating_set": self.violating_set,
            "sigma_set": self.sigma_set,
            "alpha": self.alpha,
            "min_degree": self.min_degree,
        }

    @classmethod
    def from_json(cls, data: dict) -> "HypothesisReport":
        sv = data["sigma_value"]
        return cls(
            k=data["k"],
            n=data["n"],
            sigma_value=INF if sv == "inf" else int(sv),
            sigma_ok=data["sigma_ok"],
            degree_condition_ok=data["degree_condition_ok"],
            alpha=data["alpha"],
            min_degree=data["min_degree"],
            violating_set=data.get("violating_set"),
            sigma_set=data.get("sigma_set"),
        )


def check_hypotheses(g: Graph, k: int, budget: int | None = DEFAULT_BUDGET) -> HypothesisReport:
    value, attaining = min_degree_sum_set(g, k + 1, budget)
    ok, violating = check_degree_condition(g, budget)
    return HypothesisReport(
        k=k,
        n=g.n,
        sigma_value=value,
        sigma_ok=value >= g.n,
        degree_condition_ok=ok,
        violating_set=sorted(violating) if violating is not None else None,
        sigma_set=attaining,
        alpha=independence_number(g, budget),
        min_degree=g.min_degree(),
    )
