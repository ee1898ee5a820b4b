"""
Chip-firing on uniform hypergraphs.

A configuration puts d = n(r-2)+1 chips on the n vertices of an
r-uniform hypergraph. Under a vertex ordering (a priority per vertex,
higher = larger variable) the class of a configuration is its
highest-priority vertex holding at least r-1 chips, and toppling that
vertex inside an incident edge moves r-1 chips from it to the other
r-1 vertices of the edge. The toppled digraph has one arc per such
toppling; its characteristic polynomial is the Macaulay determinant of
the eigen-system.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, islice, product
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from django.conf import settings
from sympy import Matrix, ZZ
from sympy.polys.matrices import DomainMatrix

from .exceptions import CapExceededError, HypergraphError, TopplingError
from .hypergraph import Hypergraph, Hypertree, SubgraphHandle, boundary, good_ordering
from .poly import IntPoly, LAM, gcd
from .spectra import ExponentParams, exponent_a

logger = logging.getLogger(__name__)

Priority = Tuple[int, ...]
Incidence = Tuple[int, int]


def chip_total(h: Hypergraph) -> int:
    return h.n * (h.r - 2) + 1


def configuration_count(n: int, d: int) -> int:
    return comb(d + n - 1, n - 1)


def rank_configuration(chips: Sequence[int]) -> int:
    """Colexicographic rank of a weak composition (stars and bars)."""
    rank, position = 0, -1
    for i, a in enumerate(chips[:-1]):
        position += a + 1
        rank += comb(position, i + 1)
    return rank


def unrank_configuration(rank: int, n: int, d: int) -> Tuple[int, ...]:
    bars = []
    upper = d + n - 1
    for i in range(n - 1, 0, -1):
        c = i - 1
        while c + 1 < upper and comb(c + 1, i) <= rank:
            c += 1
        rank -= comb(c, i)
        bars.append(c)
        upper = c
    bars.reverse()
    chips, previous = [], -1
    for bar in bars:
        chips.append(bar - previous - 1)
        previous = bar
    chips.append(d + n - 2 - previous)
    return tuple(chips)


def iter_configurations(n: int, d: int) -> Iterator[Tuple[int, ...]]:
    """All weak compositions of d into n parts (unordered with respect to rank)."""
    for bars in combinations(range(d + n - 1), n - 1):
        chips, previous = [], -1
        for bar in bars:
            chips.append(bar - previous - 1)
            previous = bar
        chips.append(d + n - 2 - previous)
        yield tuple(chips)


@dataclass(frozen=True)
class Configuration:
    chips: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "chips", tuple(int(a) for a in self.chips))
        if any(a < 0 for a in self.chips):
            raise TopplingError("configurations hold a nonnegative number of chips per vertex")

    @property
    def total(self) -> int:
        return sum(self.chips)

    def __getitem__(self, v: int) -> int:
        return self.chips[v]


def identity_priority(n: int) -> Priority:
    return tuple(range(n))


def priority_from_sequence(h: Hypergraph, labels: Sequence[str]) -> Priority:
    """
    Priority from vertex labels listed from the largest variable to the smallest.
    """
    if len(labels) != h.n or len(set(labels)) != h.n:
        raise HypergraphError("an explicit ordering must list every vertex label exactly once")
    priority = [0] * h.n
    for position, label in enumerate(labels):
        priority[h.vertex_of(label)] = h.n - 1 - position
    return tuple(priority)


def _descending(priority: Priority) -> List[int]:
    return sorted(range(len(priority)), key=lambda v: -priority[v])


def classify(cfg: Configuration, ordering: Priority, r: int) -> int:
    """The highest-priority vertex with at least r-1 chips."""
    for v in _descending(ordering):
        if cfg[v] >= r - 1:
            return v
    raise TopplingError("configuration has no vertex with r-1 chips")


def incidence_column(h: Hypergraph, v: int, e: int) -> Tuple[int, ...]:
    """Column (v, e) of the generalized incidence matrix."""
    column = [0] * h.n
    for w in h.edges[e]:
        column[w] = h.r - 1 if w == v else -1
    return tuple(column)


def topple(h: Hypergraph, cfg: Configuration, v: int, e: int, ordering: Priority) -> Configuration:
    if e not in h.edges_at(v):
        raise TopplingError(f"vertex {v} is not in edge {e}")
    if cfg[v] < h.r - 1:
        raise TopplingError(f"vertex {v} holds {cfg[v]} chips and cannot topple")
    designated = classify(cfg, ordering, h.r)
    if designated != v:
        raise TopplingError(f"vertex {designated} outranks vertex {v}")
    column = incidence_column(h, v, e)
    return Configuration(tuple(a - b for a, b in zip(cfg.chips, column)))


@dataclass(frozen=True)
class IncidenceVector:
    """Nonnegative counts z(v, e) over incidences."""

    entries: Tuple[Tuple[Incidence, int], ...]

    @classmethod
    def from_counts(cls, counts: Dict[Incidence, int]) -> "IncidenceVector":
        if any(c < 0 for c in counts.values()):
            raise TopplingError("incidence counts are nonnegative")
        return cls(tuple(sorted((key, c) for key, c in counts.items() if c)))

    @classmethod
    def edge_indicator(cls, h: Hypergraph, e: int) -> "IncidenceVector":
        return cls.from_counts({(v, e): 1 for v in h.edges[e]})

    @classmethod
    def from_trace(cls, trace: Sequence[Incidence]) -> "IncidenceVector":
        return cls.from_counts(Counter(trace))

    def apply(self, h: Hypergraph, cfg: Configuration) -> Configuration:
        """cfg - B z."""
        chips = list(cfg.chips)
        for (v, e), count in self.entries:
            for w, b in enumerate(incidence_column(h, v, e)):
                chips[w] -= b * count
        return Configuration(tuple(chips))


@dataclass
class ToppledDigraph:
    """All configurations of one hypergraph under one ordering, with toppling arcs."""

    hypergraph: Hypergraph
    priority: Priority
    d: int
    configs: List[Tuple[int, ...]]
    class_of: List[int]
    graph: nx.DiGraph

    def __len__(self) -> int:
        return len(self.configs)

    def index_of(self, chips: Sequence[int]) -> int:
        return rank_configuration(chips)

    def configuration(self, index: int) -> Configuration:
        return Configuration(self.configs[index])

    @cached_property
    def components(self) -> List[frozenset]:
        return [frozenset(c) for c in nx.strongly_connected_components(self.graph)]

    @cached_property
    def component_index(self) -> List[int]:
        index = [0] * len(self.configs)
        for i, members in enumerate(self.components):
            for node in members:
                index[node] = i
        return index

    def component_of(self, node: int) -> frozenset:
        return self.components[self.component_index[node]]

    def is_reduced(self, node: int) -> bool:
        """Exactly one vertex holds at least r-1 chips."""
        threshold = self.hypergraph.r - 1
        return sum(1 for a in self.configs[node] if a >= threshold) == 1


def build_toppled_digraph(h: Hypergraph, ordering: Priority = None, cap: int = None) -> ToppledDigraph:
    priority = identity_priority(h.n) if ordering is None else tuple(ordering)
    if len(priority) != h.n:
        raise HypergraphError("ordering must give a priority for every vertex")
    cap = settings.HYPERTREE_DIGRAPH_CAP if cap is None else cap
    d = chip_total(h)
    count = configuration_count(h.n, d)
    if count > cap:
        raise CapExceededError("toppled digraph configurations", cap, count)

    configs: List[Tuple[int, ...]] = [()] * count
    for chips in iter_configurations(h.n, d):
        configs[rank_configuration(chips)] = chips

    descending = _descending(priority)
    threshold = h.r - 1
    class_of = [0] * count
    graph = nx.DiGraph()
    graph.add_nodes_from(range(count))
    for index, chips in enumerate(configs):
        k = next(v for v in descending if chips[v] >= threshold)
        class_of[index] = k
        for e in h.edges_at(k):
            target = list(chips)
            target[k] -= threshold
            for w in h.edges[e]:
                if w != k:
                    target[w] += 1
            graph.add_edge(index, rank_configuration(target), incidence=(k, e))

    logger.debug("toppled digraph: %d configurations, %d arcs", count, graph.number_of_edges())
    return ToppledDigraph(h, priority, d, configs, class_of, graph)


def toppling_trace(dg: ToppledDigraph, cycle: Sequence[int]) -> List[Incidence]:
    return [dg.graph.edges[a, b]["incidence"] for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]])]


def has_hop(h: Hypergraph, trace: Sequence[Incidence]) -> bool:
    """Two consecutive incidences (i, e), (j, f) with j outside e."""
    steps = list(trace) + list(trace[:1])
    return any(j not in h.edges[e] for (_, e), (j, _) in zip(steps, steps[1:]))


def is_single_edge_trace(h: Hypergraph, trace: Sequence[Incidence]) -> bool:
    """The trace topples every vertex of one edge exactly once (the vector j_e)."""
    edges = {e for _, e in trace}
    if len(edges) != 1:
        return False
    (e,) = edges
    return sorted(v for v, _ in trace) == list(h.edges[e])


@dataclass(frozen=True)
class SccCycles:
    size: int
    lengths: Dict[int, int]
    cycles: int


@dataclass(frozen=True)
class CycleCensus:
    lengths: Dict[int, int]
    scc_sizes: Dict[int, int]
    per_scc: Tuple[SccCycles, ...]
    length_cap: int
    partial: bool
    single_edge_cycles: int
    hop_cycles: int

    @property
    def cycles(self) -> int:
        return sum(self.lengths.values())

    def all_multiples_of(self, r: int) -> bool:
        return all(length % r == 0 for length in self.lengths)


def cycle_census(dg: ToppledDigraph, length_cap: int = None, cycle_cap: int = None) -> CycleCensus:
    """
    Directed-cycle lengths of a toppled digraph, per strong component.

    Cycles longer than ``length_cap`` (default r*m) are not searched; if the
    number of cycles reaches ``cycle_cap`` the census stops and is marked
    partial.
    """
    h = dg.hypergraph
    length_cap = h.r * max(h.m, 1) if length_cap is None else length_cap
    cycle_cap = settings.HYPERTREE_CYCLE_CAP if cycle_cap is None else cycle_cap

    lengths: Counter = Counter()
    sizes = Counter(len(c) for c in dg.components)
    per_scc, seen, partial = [], 0, False
    single_edge = hops = 0
    for members in sorted(dg.components, key=min):
        if len(members) < 2:
            continue
        local: Counter = Counter()
        for cycle in nx.simple_cycles(dg.graph.subgraph(members), length_bound=length_cap):
            if seen >= cycle_cap:
                partial = True
                break
            seen += 1
            local[len(cycle)] += 1
            trace = toppling_trace(dg, cycle)
            single_edge += is_single_edge_trace(h, trace)
            hops += has_hop(h, trace)
        per_scc.append(SccCycles(len(members), dict(sorted(local.items())), sum(local.values())))
        lengths.update(local)
        if partial:
            logger.info("cycle census stopped after %d cycles", cycle_cap)
            break

    return CycleCensus(
        lengths=dict(sorted(lengths.items())),
        scc_sizes=dict(sorted(sizes.items())),
        per_scc=tuple(per_scc),
        length_cap=length_cap,
        partial=partial,
        single_edge_cycles=single_edge,
        hop_cycles=hops,
    )


def is_parking(seq: Sequence[int]) -> bool:
    return all(1 <= b <= i for i, b in enumerate(sorted(seq), start=1))


def parking_functions(length: int) -> Iterator[Tuple[int, ...]]:
    return (seq for seq in product(range(1, length + 1), repeat=length) if is_parking(seq))


def _edge_hats(tree: Hypergraph) -> List[Tuple[int, ...]]:
    # In good-ordering coordinates the root of an edge is its least label.
    return [edge[1:] for edge in tree.edges]


def is_critical(t: Hypertree, cfg: Configuration) -> bool:
    """
    ((r-1) - cfg) restricted to every edge minus its root is a parking function.

    ``cfg`` is indexed by good-ordering labels.
    """
    threshold = t.r - 1
    return all(is_parking([threshold - cfg[v] for v in hat]) for hat in _edge_hats(t.relabeled))


def critical_configurations(t: Hypertree) -> List[Configuration]:
    """All critical configurations, generated edge slice by edge slice."""
    threshold = t.r - 1
    hats = _edge_hats(t.relabeled)
    slices = [
        [tuple(threshold - p for p in seq) for seq in parking_functions(threshold)] for _ in hats
    ]
    d = chip_total(t.base)
    result = []
    for choice in product(*slices):
        chips = [0] * t.n
        for hat, values in zip(hats, choice):
            for v, a in zip(hat, values):
                chips[v] = a
        chips[0] = d - sum(chips)
        result.append(Configuration(tuple(chips)))
    return result


def representative_digraph(tree: Hypergraph, edge_ids: Sequence[int] = None, vertices: Sequence[int] = ()) -> nx.DiGraph:
    """
    One directed r-cycle per edge, running from the edge's least label upwards.

    ``tree`` is in good-ordering coordinates; ``edge_ids`` restricts to a
    subgraph and ``vertices`` adds isolated vertices.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(vertices)
    for e in range(tree.m) if edge_ids is None else edge_ids:
        edge = tree.edges[e]
        graph.add_edges_from(zip(edge, edge[1:] + edge[:1]))
    if edge_ids is None:
        graph.add_nodes_from(range(tree.n))
    return graph


@dataclass(frozen=True)
class SccWitness:
    members: Tuple[int, ...]
    bijection: Dict[int, int]
    bijective: bool
    arcs_within_edges: bool
    isomorphic: bool

    @property
    def holds(self) -> bool:
        return self.bijective and self.arcs_within_edges and self.isomorphic


def critical_scc_check(t: Hypertree, cfg: Configuration, dg: ToppledDigraph = None) -> SccWitness:
    """
    Check that the strong component of a critical configuration is a copy
    of the representative digraph, with the class map as the isomorphism.
    """
    if not is_critical(t, cfg):
        raise TopplingError(f"{cfg.chips} is not critical")
    tree = t.relabeled
    dg = dg or build_toppled_digraph(tree)
    node = dg.index_of(cfg.chips)
    members = tuple(sorted(dg.component_of(node)))
    bijection = {member: dg.class_of[member] for member in members}
    bijective = sorted(bijection.values()) == list(range(tree.n))
    sub = dg.graph.subgraph(members)
    vertex_sets = [set(edge) for edge in tree.edges]
    within = all(any({bijection[a], bijection[b]} <= s for s in vertex_sets) for a, b in sub.edges)
    isomorphic = nx.is_isomorphic(sub, representative_digraph(tree))
    return SccWitness(members, bijection, bijective, within, isomorphic)


@dataclass(frozen=True)
class SubgraphCensus:
    count: int
    expected: int
    root: int
    verified: Optional[bool] = None


def subgraph_config_census(t: Hypertree, H: SubgraphHandle, verify: bool = False, cap: int = None) -> SubgraphCensus:
    """
    Count configurations whose slices single out the connected subgraph H.

    The hypertree is re-rooted at the vertex of H with the least label.
    A configuration is admissible when
      - on every edge of H, (r-1) - slice is a parking function;
      - on every boundary edge, (r-1) - slice is positive and not parking;
      - every other non-root vertex holds at most r-2 chips.
    """
    u = min(H.vertex_set, key=lambda v: t.labels[v])
    rerooted = good_ordering(t.base, u)
    tree = rerooted.relabeled
    threshold = t.r - 1
    inside = set(H.edge_set)
    frontier = boundary(t.base, H)
    hats = _edge_hats(tree)
    d = chip_total(tree)
    cap = settings.HYPERTREE_DIGRAPH_CAP if cap is None else cap
    total = configuration_count(tree.n, d)
    if total > cap:
        raise CapExceededError("configurations to scan", cap, total)

    def admissible(chips: Tuple[int, ...]) -> bool:
        for e, hat in enumerate(hats):
            values = [threshold - chips[v] for v in hat]
            if e in inside:
                if not is_parking(values):
                    return False
            elif min(values) <= 0:
                return False
            elif e in frontier and is_parking(values):
                return False
        return True

    chosen = [chips for chips in iter_configurations(tree.n, d) if admissible(chips)]
    expected = exponent_a(ExponentParams.for_tree(t.r, t.m), H)

    verified = None
    if verify:
        dg = build_toppled_digraph(tree, cap=cap)
        labels = [rerooted.labels[v] for v in H.vertex_set]
        target = representative_digraph(tree, H.edge_set, labels)
        verified = all(
            dg.class_of[dg.index_of(chips)] == 0
            and nx.is_isomorphic(dg.graph.subgraph(dg.component_of(dg.index_of(chips))), target)
            for chips in chosen
        )
    return SubgraphCensus(len(chosen), expected, u, verified)


@dataclass(frozen=True)
class IncidenceKernelReport:
    rank: int
    kernel_dimension: int
    incidences: Tuple[Incidence, ...]
    row_sums_zero: bool
    column_sums_zero: bool
    edge_vectors_span_kernel: bool


def incidence_matrix(h: Hypergraph) -> Tuple[Matrix, Tuple[Incidence, ...]]:
    incidences = tuple((v, e) for e, edge in enumerate(h.edges) for v in edge)
    columns = [incidence_column(h, v, e) for v, e in incidences]
    return Matrix(h.n, len(incidences), lambda i, j: columns[j][i]), incidences


def incidence_matrix_kernel(h: Hypergraph) -> IncidenceKernelReport:
    """
    Rank of the generalized incidence matrix B and whether the edge
    indicators j_e span its kernel.
    """
    if not h.is_connected():
        raise HypergraphError("the incidence kernel check needs a connected hypergraph")
    if h.m == 0:
        return IncidenceKernelReport(0, 0, (), True, True, True)
    B, incidences = incidence_matrix(h)
    rank = B.rank()
    kernel_dimension = len(incidences) - rank
    indicators = Matrix(len(incidences), h.m, lambda i, e: 1 if incidences[i][1] == e else 0)
    spans = bool((B * indicators).is_zero_matrix) and indicators.rank() == kernel_dimension
    return IncidenceKernelReport(
        rank=rank,
        kernel_dimension=kernel_dimension,
        incidences=incidences,
        row_sums_zero=all(sum(B.row(i)) == 0 for i in range(B.rows)),
        column_sums_zero=all(sum(B.col(j)) == 0 for j in range(B.cols)),
        edge_vectors_span_kernel=spans,
    )


def _dense_charpoly(graph: nx.DiGraph, cap: int) -> IntPoly:
    nodes = sorted(graph.nodes)
    if len(nodes) > cap:
        raise CapExceededError("strong component for the dense characteristic polynomial", cap, len(nodes))
    position = {node: i for i, node in enumerate(nodes)}
    rows = [[0] * len(nodes) for _ in nodes]
    for a, b in graph.edges:
        rows[position[a]][position[b]] += 1
    coefficients = DomainMatrix.from_list(rows, ZZ).charpoly()
    size = len(nodes)
    return IntPoly({size - i: int(c) for i, c in enumerate(coefficients)})


def _cycle_cover_charpoly(graph: nx.DiGraph, r: int, cycle_cap: int = 1000) -> Optional[IntPoly]:
    """
    Characteristic polynomial from disjoint r-cycles, or None when the
    component has a cycle of another length (or too many cycles).
    """
    cycles = list(islice(nx.simple_cycles(graph), cycle_cap + 1))
    if len(cycles) > cycle_cap or any(len(c) != r for c in cycles):
        return None
    node_sets = [frozenset(c) for c in cycles]
    counts: Counter = Counter()

    def extend(start: int, used: frozenset, chosen: int):
        counts[chosen] += 1
        for i in range(start, len(node_sets)):
            if not node_sets[i] & used:
                extend(i + 1, used | node_sets[i], chosen + 1)

    extend(0, frozenset(), 0)
    size = graph.number_of_nodes()
    return IntPoly({size - r * j: (-1) ** j * c for j, c in counts.items()})


def digraph_charpoly(graph: nx.DiGraph, r: int = None, dense_cap: int = None) -> IntPoly:
    """
    Characteristic polynomial of a digraph's adjacency matrix, as the product
    over strong components. With ``r`` given, components whose cycles all
    have length r are handled by counting disjoint cycles; the rest go
    through the dense division-free characteristic polynomial.
    """
    dense_cap = settings.HYPERTREE_DENSE_CHARPOLY_CAP if dense_cap is None else dense_cap
    trivial = 0
    result = IntPoly.constant(1)
    for members in nx.strongly_connected_components(graph):
        if len(members) == 1:
            (node,) = members
            if not graph.has_edge(node, node):
                trivial += 1
                continue
        sub = graph.subgraph(members)
        poly = _cycle_cover_charpoly(sub, r) if r is not None else None
        result = result * (poly if poly is not None else _dense_charpoly(sub, dense_cap))
    return result * LAM ** trivial


@dataclass(frozen=True)
class ResultantRatio:
    """D = charpoly of the toppled digraph, D' = charpoly on non-reduced configurations."""

    full: IntPoly
    extraneous: IntPoly
    resultant: IntPoly


def resultant_from_digraph(dg: ToppledDigraph) -> ResultantRatio:
    r = dg.hypergraph.r
    full = digraph_charpoly(dg.graph, r)
    non_reduced = [node for node in range(len(dg)) if not dg.is_reduced(node)]
    extraneous = digraph_charpoly(dg.graph.subgraph(non_reduced), r) if non_reduced else IntPoly.constant(1)
    return ResultantRatio(full, extraneous, full.exact_div(extraneous))


def root_gcd(h: Hypergraph, cap: int = None) -> IntPoly:
    """gcd over every root of the toppled-digraph characteristic polynomials (good orderings)."""
    result = IntPoly.zero()
    for root in range(h.n):
        tree = good_ordering(h, root).relabeled
        result = gcd(result, digraph_charpoly(build_toppled_digraph(tree, cap=cap).graph, h.r))
    return result


@dataclass(frozen=True)
class ToppleSummary:
    config_count: int
    scc_histogram: Dict[int, int]
    census: CycleCensus
    critical_count: Optional[int]
    single_edge_cycles_only: Optional[bool]
    cycle_lengths_divisible: bool
    critical_components_match: Optional[bool]


def topple_summary(
    h: Hypergraph,
    root: int = 0,
    ordering: Priority = None,
    cap: int = None,
    length_cap: int = None,
    cycle_cap: int = None,
) -> ToppleSummary:
    """
    Build and analyse one toppled digraph.

    Without an explicit ordering the hypertree is put in the good ordering
    rooted at ``root`` and the critical-configuration checks run as well;
    with one, only the cycle-length checks apply.
    """
    if ordering is None:
        t = good_ordering(h, root)
        dg = build_toppled_digraph(t.relabeled, cap=cap)
    else:
        t = None
        dg = build_toppled_digraph(h, ordering, cap=cap)
    census = cycle_census(dg, length_cap, cycle_cap)
    divisible = census.all_multiples_of(h.r)

    critical_count = single_edge = matched = None
    if t is not None:
        single_edge = set(census.lengths) <= {h.r} and census.single_edge_cycles == census.cycles
        critical = [
            node
            for node in range(len(dg))
            if dg.class_of[node] == 0 and is_critical(t, dg.configuration(node))
        ]
        critical_count = len(critical)
        distinct = len({dg.component_index[node] for node in critical}) == len(critical)
        matched = distinct and all(critical_scc_check(t, dg.configuration(node), dg).holds for node in critical)
    return ToppleSummary(len(dg), census.scc_sizes, census, critical_count, single_edge, divisible, matched)
