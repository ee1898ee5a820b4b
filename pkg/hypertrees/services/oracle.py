"""
Ground-truth engines for cross-checking the factored results.

The Macaulay matrix of the eigen-system

    F_i = l * x_i^(r-1) - sum over edges e at i of x_(e minus i)

is assembled row by row from the monomials of degree d = n(r-2)+1,
its determinant D and the determinant D' of the non-reduced minor are
obtained by exact integer evaluation and interpolation, and D / D'
is the characteristic polynomial.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
from django.conf import settings
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .exceptions import CapExceededError, HypergraphError, OracleError
from .hypergraph import Hypergraph
from .matching import MatchingProfile, pairwise_disjoint
from .poly import IntPoly, gcd
from .toppling import (
    Priority,
    chip_total,
    configuration_count,
    identity_priority,
    iter_configurations,
    priority_from_sequence,
    rank_configuration,
)

logger = logging.getLogger(__name__)

OrderingSpec = Union[str, Sequence[str], Priority]
Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class EigenEquation:
    """F_i = l * x_i^(r-1) + sum of coefficient * monomial."""

    vertex: int
    leading: Monomial
    terms: Tuple[Tuple[int, Monomial], ...]


def eigen_system(h: Hypergraph) -> List[EigenEquation]:
    equations = []
    for i in range(h.n):
        leading = tuple(h.r - 1 if v == i else 0 for v in range(h.n))
        terms = []
        for e in h.edges_at(i):
            others = set(h.edges[e]) - {i}
            terms.append((-1, tuple(1 if v in others else 0 for v in range(h.n))))
        equations.append(EigenEquation(i, leading, tuple(terms)))
    return equations


def resolve_ordering(h: Hypergraph, ordering: OrderingSpec) -> Priority:
    """
    "descending": the class of a monomial is its highest-indexed dividing
    variable; "ascending": its lowest-indexed one. Anything else is an
    explicit label sequence (largest variable first) or a priority tuple.
    """
    if ordering == "descending" or ordering is None:
        return identity_priority(h.n)
    if ordering == "ascending":
        return tuple(h.n - 1 - v for v in range(h.n))
    if isinstance(ordering, str):
        raise HypergraphError(f"unknown ordering {ordering!r}")
    ordering = tuple(ordering)
    if all(isinstance(p, int) for p in ordering):
        if sorted(ordering) != list(range(h.n)):
            raise HypergraphError("a priority tuple must be a permutation of the vertex ids")
        return ordering
    return priority_from_sequence(h, [str(label) for label in ordering])


@dataclass
class MacaulaySystem:
    """
    Rows of the Macaulay matrix, one per monomial of degree d.

    ``entries[row]`` maps a column to (coefficient of l, constant).
    """

    hypergraph: Hypergraph
    priority: Priority
    d: int
    monomials: List[Monomial]
    class_of: List[int]
    entries: List[Dict[int, Tuple[int, int]]]

    @property
    def size(self) -> int:
        return len(self.monomials)

    @cached_property
    def reduced_mask(self) -> Tuple[bool, ...]:
        threshold = self.hypergraph.r - 1
        return tuple(sum(1 for a in alpha if a >= threshold) == 1 for alpha in self.monomials)

    @property
    def reduced_count(self) -> int:
        return sum(self.reduced_mask)

    def class_sizes(self) -> Dict[int, int]:
        sizes = {i: 0 for i in range(self.hypergraph.n)}
        for i in self.class_of:
            sizes[i] += 1
        return sizes

    @cached_property
    def pattern(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.size))
        for row, columns in enumerate(self.entries):
            graph.add_edges_from((row, col) for col in columns if col != row)
        return graph

    def entry(self, row: int, col: int, value: int, scale: Optional[Dict[int, int]] = None) -> int:
        lam, constant = self.entries[row].get(col, (0, 0))
        factor = (scale or {}).get(self.class_of[row], 1)
        return factor * (lam * value + constant)

    def matrix_at(self, rows: Sequence[int], value: int, scale: Optional[Dict[int, int]] = None) -> DomainMatrix:
        grid = [[self.entry(row, col, value, scale) for col in rows] for row in rows]
        return DomainMatrix.from_list(grid, ZZ)


def build_macaulay_system(h: Hypergraph, ordering: OrderingSpec = "descending", cap: int = None) -> MacaulaySystem:
    cap = settings.HYPERTREE_MACAULAY_CAP if cap is None else cap
    priority = resolve_ordering(h, ordering)
    d = chip_total(h)
    size = configuration_count(h.n, d)
    if size > cap:
        raise CapExceededError("Macaulay matrix size", cap, size)

    monomials: List[Monomial] = [()] * size
    for alpha in iter_configurations(h.n, d):
        monomials[rank_configuration(alpha)] = alpha

    descending = sorted(range(h.n), key=lambda v: -priority[v])
    equations = eigen_system(h)
    class_of, entries = [], []
    for row, alpha in enumerate(monomials):
        i = next(v for v in descending if alpha[v] >= h.r - 1)
        equation = equations[i]
        multiplier = tuple(a - b for a, b in zip(alpha, equation.leading))
        columns: Dict[int, Tuple[int, int]] = {row: (1, 0)}
        for coefficient, monomial in equation.terms:
            col = rank_configuration(tuple(a + b for a, b in zip(multiplier, monomial)))
            lam, constant = columns.get(col, (0, 0))
            columns[col] = (lam, constant + coefficient)
        class_of.append(i)
        entries.append(columns)
    return MacaulaySystem(h, priority, d, monomials, class_of, entries)


def interpolate_integer(points: Sequence[int], values: Sequence[int]) -> IntPoly:
    """The polynomial of degree < len(points) through the given integer values."""
    k = len(points)
    vandermonde = DomainMatrix.from_list([[x ** j for j in range(k)] for x in points], QQ)
    rhs = DomainMatrix.from_list([[y] for y in values], QQ)
    solution = vandermonde.lu_solve(rhs).to_list()
    coefficients = {}
    for j, (c,) in enumerate(solution):
        if c.denominator != 1:
            raise OracleError(f"interpolated coefficient of l^{j} is not an integer")
        coefficients[j] = int(c.numerator)
    return IntPoly(coefficients)


def _block_polynomial(
    system: MacaulaySystem, members: Sequence[int], offset: int, scale: Optional[Dict[int, int]], workers: int
) -> IntPoly:
    if len(members) == 1:
        (node,) = members
        lam, constant = system.entries[node].get(node, (0, 0))
        factor = (scale or {}).get(system.class_of[node], 1)
        return IntPoly({1: factor * lam, 0: factor * constant})
    points = list(range(offset, offset + len(members) + 1))

    def evaluate(x: int) -> int:
        return int(system.matrix_at(members, x, scale).det())

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, points))
    else:
        values = [evaluate(x) for x in points]
    return interpolate_integer(points, values)


def determinant_polynomial(
    system: MacaulaySystem,
    rows: Sequence[int] = None,
    point_offset: int = 0,
    scale: Optional[Dict[int, int]] = None,
    workers: int = None,
) -> IntPoly:
    """
    det of the principal minor on ``rows`` as a polynomial in l.

    The minor is block triangular along the strong components of its
    sparsity pattern, so each diagonal block is evaluated at consecutive
    integers from ``point_offset`` and interpolated on its own.
    """
    rows = list(range(system.size)) if rows is None else list(rows)
    workers = settings.HYPERTREE_WORKERS if workers is None else workers
    result = IntPoly.constant(1)
    pattern = system.pattern.subgraph(rows)
    for members in sorted(nx.strongly_connected_components(pattern), key=min):
        result = result * _block_polynomial(system, sorted(members), point_offset, scale, workers)
    return result


def determinant_at(system: MacaulaySystem, value: int, scale: Optional[Dict[int, int]] = None) -> int:
    """Dense determinant of the whole Macaulay matrix at l = value."""
    return int(system.matrix_at(range(system.size), value, scale).det())


@dataclass(frozen=True)
class HomogeneityCheck:
    vertex: int
    factor: int
    class_size: int
    scaled: int
    expected: int

    @property
    def holds(self) -> bool:
        return self.scaled == self.expected


def check_homogeneity(system: MacaulaySystem, vertex: int, factor: int, value: int) -> HomogeneityCheck:
    """Scaling the coefficients of F_vertex by ``factor`` scales D by factor^|S_vertex|."""
    size = system.class_sizes()[vertex]
    base = determinant_at(system, value)
    scaled = determinant_at(system, value, {vertex: factor})
    return HomogeneityCheck(vertex, factor, size, scaled, factor ** size * base)


@dataclass(frozen=True)
class MacaulayResult:
    system: MacaulaySystem
    full: IntPoly
    extraneous: IntPoly
    charpoly: IntPoly


def macaulay_determinants(
    h: Hypergraph,
    ordering: OrderingSpec = "descending",
    cap: int = None,
    point_offset: int = 0,
    workers: int = None,
) -> MacaulayResult:
    system = build_macaulay_system(h, ordering, cap)
    full = determinant_polynomial(system, point_offset=point_offset, workers=workers)
    non_reduced = [row for row, reduced in enumerate(system.reduced_mask) if not reduced]
    extraneous = determinant_polynomial(system, non_reduced, point_offset, workers=workers)
    if extraneous.is_zero:
        logger.warning("non-reduced minor of a %d-vertex system vanishes identically", h.n)
        raise OracleError("the non-reduced minor is identically zero")

    charpoly = full.exact_div(extraneous)
    if charpoly.leading_coefficient < 0:
        charpoly = -charpoly
    if charpoly.leading_coefficient != 1:
        raise OracleError(f"resultant is not monic: leading coefficient {charpoly.leading_coefficient}")
    if charpoly.degree != system.reduced_count:
        raise OracleError(f"degree {charpoly.degree} differs from {system.reduced_count} reduced monomials")
    logger.debug("Macaulay system of size %d: degree %d", system.size, charpoly.degree)
    return MacaulayResult(system, full, extraneous, charpoly)


def macaulay_charpoly(
    h: Hypergraph,
    ordering: OrderingSpec = "descending",
    cap: int = None,
    point_offset: int = 0,
    workers: int = None,
) -> IntPoly:
    """
    Exact characteristic polynomial of a small hypergraph from its
    Macaulay matrix.

    Args:
        h: Any uniform hypergraph whose Macaulay matrix fits the cap.
        ordering: How monomials are split into classes (see resolve_ordering).
        cap: Largest matrix size accepted (settings default when None).
        point_offset: First evaluation point; shifting it must not change
            the result.
        workers: Threads for the determinant evaluations.

    Returns:
        The monic characteristic polynomial, of degree n (r-1)^(n-1).
    """
    return macaulay_determinants(h, ordering, cap, point_offset, workers).charpoly


def ordering_gcd(h: Hypergraph, cap: int = None) -> IntPoly:
    """gcd of D over the orderings that make each variable the smallest in turn."""
    result = IntPoly.zero()
    for last in range(h.n):
        rest = [v for v in range(h.n) if v != last]
        priority = [0] * h.n
        for p, v in enumerate(rest, start=1):
            priority[v] = p
        system = build_macaulay_system(h, tuple(priority), cap)
        result = gcd(result, determinant_polynomial(system))
    return result


def adjacency_charpoly_2graph(g: Hypergraph) -> IntPoly:
    """det(l I - A) of a simple graph, by the division-free characteristic polynomial."""
    if g.r != 2:
        raise HypergraphError(f"adjacency matrices need a 2-graph, got r={g.r}")
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        rows[u][v] = rows[v][u] = 1
    coefficients = DomainMatrix.from_list(rows, ZZ).charpoly()
    return IntPoly({g.n - i: int(c) for i, c in enumerate(coefficients)})


def brute_matchings(h: Hypergraph, limit: int = 20) -> MatchingProfile:
    """k-matching counts by checking every edge subset."""
    if h.m > limit:
        raise CapExceededError("edges for exhaustive matching enumeration", limit, h.m)
    counts = [1]
    for k in range(1, h.m + 1):
        found = sum(1 for subset in combinations(range(h.m), k) if pairwise_disjoint(h, subset))
        if not found:
            break
        counts.append(found)
    return MatchingProfile.from_counts(counts, h.n)
