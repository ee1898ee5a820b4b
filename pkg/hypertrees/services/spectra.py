"""
Characteristic polynomials of hypertrees in factored form.

The characteristic polynomial of an r-uniform hypertree T is

    prod over connected subgraphs H of T of  phi_H(l) ** a_H,
    a_H = b^(m - e(H) - |dH|) * c^e(H) * (b - c)^|dH|,
    b = (r-1)^(r-1),  c = r^(r-2),

where phi_H is the matching polynomial of H. Everything downstream
(unions, vertex-deleted subgraphs, nullity, divisibility) is built on
that product.
"""
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from django.conf import settings

from .catalog import loose_path
from .exceptions import HypergraphError, HypertreeError, SubgraphError
from .hypergraph import (
    Decomposition,
    Hypergraph,
    Hypertree,
    SubgraphHandle,
    connected_subgraphs,
    delete_vertices,
    good_ordering,
)
from .matching import MatchingProfile, matching_counts, matching_polynomial
from .poly import FactoredPoly, IntPoly, divides, factored_gcd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExponentParams:
    b: int
    c: int
    m: int

    @classmethod
    def for_tree(cls, r: int, m: int) -> "ExponentParams":
        return cls((r - 1) ** (r - 1), r ** (r - 2), m)


@dataclass(frozen=True)
class SubgraphFactor:
    handle: SubgraphHandle
    base: IntPoly
    exponent: int
    nu: int


@dataclass(frozen=True)
class CharPolyReport:
    factored: FactoredPoly
    per_subgraph: Tuple[SubgraphFactor, ...]
    total_degree: int
    nullity: int


def exponent_a(params: ExponentParams, H: SubgraphHandle) -> int:
    free = params.m - H.size - H.boundary_size
    if free < 0:
        raise SubgraphError(
            f"handle with {H.size} edges and boundary {H.boundary_size} does not fit in {params.m} edges"
        )
    return params.b ** free * params.c ** H.size * (params.b - params.c) ** H.boundary_size


def _subgraph_factor(t: Hypertree, params: ExponentParams, handle: SubgraphHandle) -> SubgraphFactor:
    if handle.is_vertex:
        profile = MatchingProfile((1,), 0, 1)
    else:
        profile = matching_counts(t.base.edge_subgraph(handle.edge_set))
    return SubgraphFactor(handle, profile.polynomial(t.r), exponent_a(params, handle), profile.nu)


def _zero_multiplicity(rows: Iterable[SubgraphFactor], r: int) -> int:
    return sum(row.exponent * (row.handle.order - r * row.nu) for row in rows)


def charpoly_hypertree(t: Hypertree, cap: int = None, workers: int = None) -> CharPolyReport:
    """
    Factored characteristic polynomial of a hypertree.

    Args:
        t: Hypertree (any root; the result does not depend on it).
        cap: Connected-subgraph enumeration cap (settings default when None).
        workers: Threads for the per-subgraph map; the reduction order is
            the enumeration order whatever the thread count.

    Returns:
        CharPolyReport with the factored product, the per-subgraph rows
        (subgraphs with a_H = 0 are dropped), total degree and nullity.
    """
    params = ExponentParams.for_tree(t.r, t.m)
    handles = list(connected_subgraphs(t, cap))
    workers = settings.HYPERTREE_WORKERS if workers is None else workers

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda handle: _subgraph_factor(t, params, handle), handles))
    else:
        rows = [_subgraph_factor(t, params, handle) for handle in handles]
    rows = tuple(row for row in rows if row.exponent)

    factored = FactoredPoly((row.base, row.exponent) for row in rows)
    total_degree = sum(row.handle.order * row.exponent for row in rows)
    expected = t.n * (t.r - 1) ** (t.n - 1)
    if total_degree != expected or factored.degree != expected:
        raise HypertreeError(f"degree identity failed: {total_degree} != {expected}")

    zero_multiplicity = _zero_multiplicity(rows, t.r)
    if zero_multiplicity != factored.valuation:
        raise HypertreeError(f"nullity sum {zero_multiplicity} differs from valuation {factored.valuation}")

    logger.debug("hypertree with %d edges: %d factors over %d subgraphs", t.m, len(factored.factors), len(rows))
    return CharPolyReport(factored, rows, total_degree, zero_multiplicity)


def nullity(report: CharPolyReport, t: Hypertree) -> int:
    """Multiplicity of the eigenvalue 0: sum of a_H (|H| - r nu(H)) over the report rows."""
    return _zero_multiplicity(report.per_subgraph, t.r)


def charpoly_union(components: Sequence[Tuple[Hypergraph, FactoredPoly]]) -> FactoredPoly:
    """
    Characteristic polynomial of a vertex-disjoint union.

    Folds phi = phi_1^((r-1)^|H2|) * phi_2^((r-1)^|H1|) left to right.
    """
    if not components:
        raise HypergraphError("union of no components")
    r = components[0][0].r
    if any(h.r != r for h, _ in components):
        raise HypergraphError("union components must share the same uniformity")
    order, result = components[0][0].n, components[0][1]
    for h, phi in components[1:]:
        result = result ** ((r - 1) ** h.n) * phi ** ((r - 1) ** order)
        order += h.n
    return result


def _component_reports(decomposition: Decomposition, cap: int = None) -> List[CharPolyReport]:
    return [charpoly_hypertree(good_ordering(component, 0), cap) for component in decomposition.components]


def _removed(t: Hypertree, keep: Iterable[int]) -> set:
    keep = set(keep)
    if any(not 0 <= v < t.n for v in keep):
        raise HypergraphError("kept vertices must belong to the hypertree")
    return set(range(t.n)) - keep


def charpoly_subgraph(t: Hypertree, keep: Iterable[int], cap: int = None) -> FactoredPoly:
    """Characteristic polynomial of the subgraph induced by ``keep``."""
    decomposition = delete_vertices(t.base, _removed(t, keep))
    reports = _component_reports(decomposition, cap)
    return charpoly_union([(c, report.factored) for c, report in zip(decomposition.components, reports)])


@dataclass(frozen=True)
class ExponentRow:
    """One connected subgraph of H: its exponent in phi_H and in phi_T."""

    vertex_set: Tuple[int, ...]
    in_subgraph: int
    in_tree: int


@dataclass(frozen=True)
class DivisibilityVerdict:
    matching_divides: bool
    charpoly_divides: bool
    corollary_predicts: bool
    connected: bool
    components: int
    subgraph_charpoly: FactoredPoly
    common_factor: FactoredPoly
    exponent_rows: Tuple[ExponentRow, ...] = ()

    @property
    def exponents_dominated(self) -> Optional[bool]:
        if not self.connected:
            return None
        return all(row.in_subgraph <= row.in_tree for row in self.exponent_rows)


def _exponent_rows(inner: CharPolyReport, owners: Sequence[int], outer: CharPolyReport) -> Tuple[ExponentRow, ...]:
    in_tree = {row.handle.vertex_set: row.exponent for row in outer.per_subgraph}
    rows = []
    for row in inner.per_subgraph:
        vertex_set = tuple(sorted(owners[v] for v in row.handle.vertex_set))
        rows.append(ExponentRow(vertex_set, row.exponent, in_tree.get(vertex_set, 0)))
    return tuple(rows)


def check_divisibility(t: Hypertree, keep: Iterable[int], cap: int = None) -> DivisibilityVerdict:
    """
    Test whether the matching and characteristic polynomials of the
    subgraph induced by ``keep`` divide the characteristic polynomial of t.

    ``corollary_predicts`` is True when divisibility of the characteristic
    polynomial is guaranteed: r >= 4, or r = 3 with a connected subgraph.
    For a connected subgraph the verdict also carries, per connected
    subgraph of H, its exponent in phi_H next to its exponent in phi_T.
    """
    decomposition = delete_vertices(t.base, _removed(t, keep))
    outer = charpoly_hypertree(t, cap)
    reports = _component_reports(decomposition, cap)
    phi_t = outer.factored
    matching_h = FactoredPoly((matching_polynomial(c), 1) for c in decomposition.components)
    charpoly_h = charpoly_union([(c, report.factored) for c, report in zip(decomposition.components, reports)])
    connected = decomposition.is_connected
    rows = _exponent_rows(reports[0], decomposition.component_vertices[0], outer) if connected else ()
    return DivisibilityVerdict(
        matching_divides=divides(matching_h, phi_t),
        charpoly_divides=divides(charpoly_h, phi_t),
        corollary_predicts=t.r >= 4 or (t.r == 3 and connected),
        connected=connected,
        components=len(decomposition.components),
        subgraph_charpoly=charpoly_h,
        common_factor=factored_gcd(charpoly_h, phi_t),
        exponent_rows=rows,
    )


@dataclass(frozen=True)
class LoosePathRow:
    j: int
    main_exponent: int
    closed_form: Fraction

    @property
    def agree(self) -> bool:
        return self.closed_form == self.main_exponent


@dataclass(frozen=True)
class LoosePathComparison:
    m: int
    r: int
    rows: Tuple[LoosePathRow, ...]
    lambda_main: Fraction
    lambda_closed: Fraction
    a0: Fraction
    factored: FactoredPoly

    @property
    def agree(self) -> bool:
        return all(row.agree for row in self.rows) and self.lambda_main == self.lambda_closed


def loose_path_closed_form(j: int, m: int, r: int) -> Fraction:
    """Exponent of phi_{P_j}(l^(r/2)) in the loose-path closed form, j >= 1."""
    k1 = (r - 1) ** (r - 1) - r ** (r - 2)
    k2 = r ** (r - 2)
    if j == m:
        return Fraction(k2 ** m)
    return Fraction((m - j + 1) * k1 + 2 * k2) * k1 * k2 ** j * Fraction(k1 + k2) ** (m - j - 2)


def loose_path_crosscheck(m: int, r: int, cap: int = None) -> LoosePathComparison:
    """
    Compare the subgraph product for the loose path P_m^r with the closed form.

    Sub-paths with j edges have matching polynomial
    l^((j-1)(r-2)/2) * phi_{P_j}(l^(r/2)), so per j the summed a_H must
    equal the closed-form exponent; the exponent for j = 0 follows from the
    degree n (r-1)^(n-1). The closed form carries its bare l only in
    the j = 0 factor, (r/2) a0, which must match the single-vertex
    exponents plus the shifts hidden in the sub-path factors.
    """
    if m < 1 or r < 3:
        raise HypergraphError("loose path comparison needs m >= 1 and r >= 3")
    report = charpoly_hypertree(good_ordering(loose_path(m, r), 0), cap)
    by_size: Dict[int, int] = defaultdict(int)
    for row in report.per_subgraph:
        by_size[row.handle.size] += row.exponent

    rows = tuple(LoosePathRow(j, by_size[j], loose_path_closed_form(j, m, r)) for j in range(1, m + 1))
    n = m * (r - 1) + 1
    shift = {j: Fraction((j - 1) * (r - 2), 2) for j in range(1, m + 1)}
    a0 = Fraction(2, r) * n * (r - 1) ** (n - 1) - sum((j + 1) * row.closed_form for j, row in zip(range(1, m + 1), rows))
    lambda_closed = Fraction(r, 2) * a0
    lambda_main = by_size[0] + sum(row.main_exponent * shift[row.j] for row in rows)
    return LoosePathComparison(m, r, rows, Fraction(lambda_main), lambda_closed, a0, report.factored)
