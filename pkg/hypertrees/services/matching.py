"""
Matching polynomials of uniform hypergraphs.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Sequence, Tuple, Union

from .exceptions import HypergraphError, NotAHypertreeError
from .hypergraph import Hypergraph, is_hypertree
from .poly import IntPoly

logger = logging.getLogger(__name__)

Pivot = Union[str, Callable[[FrozenSet[int]], int]]


@dataclass(frozen=True)
class MatchingProfile:
    """counts[k] = number of k-matchings; nu = matching number; order = vertex count."""

    counts: Tuple[int, ...]
    nu: int
    order: int

    @classmethod
    def from_counts(cls, counts: Sequence[int], order: int) -> "MatchingProfile":
        counts = list(counts)
        while len(counts) > 1 and counts[-1] == 0:
            counts.pop()
        return cls(tuple(counts), len(counts) - 1, order)

    def polynomial(self, r: int) -> IntPoly:
        """sum_k (-1)^k m(k) l^(order - k r)."""
        return IntPoly({self.order - k * r: (-1) ** k * c for k, c in enumerate(self.counts)})


class MatchingCounter:
    """
    k-matching counts by the deletion recursion

        m_H(k) = m_{H-e}(k) + m_{H-V(e)}(k-1)

    memoized on the surviving edge set. The pivot is the least edge id by
    default; "max" or any callable picking an edge from the set also work.
    """

    PIVOTS = ("min", "max")

    def __init__(self, h: Hypergraph, pivot: Pivot = "min"):
        if isinstance(pivot, str) and pivot not in self.PIVOTS:
            raise ValueError(f"unknown pivot rule {pivot!r}")
        self.h = h
        self.pivot = pivot
        self._memo: Dict[FrozenSet[int], Tuple[int, ...]] = {}
        vertex_sets = [set(edge) for edge in h.edges]
        self._conflicts = [
            frozenset(f for f, other in enumerate(vertex_sets) if edge & other) for edge in vertex_sets
        ]

    def _choose(self, edges: FrozenSet[int]) -> int:
        if self.pivot == "min":
            return min(edges)
        if self.pivot == "max":
            return max(edges)
        return self.pivot(edges)

    def counts(self, edges: FrozenSet[int] = None) -> Tuple[int, ...]:
        if edges is None:
            edges = frozenset(range(self.h.m))
        if not edges:
            return (1,)
        cached = self._memo.get(edges)
        if cached is not None:
            return cached
        e = self._choose(edges)
        without = self.counts(edges - {e})
        using = self.counts(edges - self._conflicts[e])
        merged = list(without) + [0] * max(0, len(using) + 1 - len(without))
        for k, c in enumerate(using):
            merged[k + 1] += c
        result = tuple(merged)
        self._memo[edges] = result
        return result

    def profile(self) -> MatchingProfile:
        return MatchingProfile.from_counts(self.counts(), self.h.n)


def matching_counts(h: Hypergraph, pivot: Pivot = "min") -> MatchingProfile:
    return MatchingCounter(h, pivot).profile()


def matching_polynomial(h: Hypergraph) -> IntPoly:
    return matching_counts(h).polynomial(h.r)


def union_matching(parts: Sequence[Hypergraph]) -> IntPoly:
    """Matching polynomial of a disjoint union: the product over the parts."""
    result = IntPoly.constant(1)
    for part in parts:
        result = result * matching_polynomial(part)
    return result


def power_hypergraph(g: Hypergraph, r_target: int) -> Hypergraph:
    """
    Inflate every edge of a 2-graph with r_target-2 fresh vertices.

    Fresh vertices of edge i get ids n + i(r_target-2) + j.
    """
    if g.r != 2:
        raise HypergraphError(f"power hypergraphs start from a 2-graph, got r={g.r}")
    if r_target < 3:
        raise HypergraphError(f"target uniformity must be at least 3, got {r_target}")
    extra = r_target - 2
    edges = []
    for i, (u, v) in enumerate(g.edges):
        fresh = tuple(g.n + i * extra + j for j in range(extra))
        edges.append((u, v) + fresh)
    n = g.n + g.m * extra
    labels = g.labels + tuple(f"{g.labels[u]}-{g.labels[v]}.{j + 1}" for u, v in g.edges for j in range(extra))
    return Hypergraph(r_target, n, tuple(edges), labels)


def power_tree_matching(t: Hypergraph, r: int) -> IntPoly:
    """
    Matching polynomial of the r-th power of a 2-tree, straight from the
    tree's matching counts: sum_k (-1)^k m_T(k) l^(|T^r| - k r).
    """
    if t.r != 2:
        raise HypergraphError(f"expected a 2-tree, got uniformity {t.r}")
    if not is_hypertree(t):
        raise NotAHypertreeError("input 2-graph is not a tree")
    if r < 3:
        raise HypergraphError(f"power must be at least 3, got {r}")
    profile = matching_counts(t)
    order = t.n + t.m * (r - 2)
    return MatchingProfile(profile.counts, profile.nu, order).polynomial(r)


def pairwise_disjoint(h: Hypergraph, edge_ids: Sequence[int]) -> bool:
    used: List[int] = []
    for e in edge_ids:
        used.extend(h.edges[e])
    return len(used) == len(set(used))
