"""
Uniform hypergraphs, hypertrees and their connected subgraphs.

Vertex ids are 0-based contiguous integers everywhere in this module;
the original input labels travel alongside in ``Hypergraph.labels``.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple

import networkx as nx
from django.conf import settings

from .exceptions import CapExceededError, HypergraphError, NotAHypertreeError, SubgraphError

logger = logging.getLogger(__name__)

Edge = Tuple[int, ...]


@dataclass(frozen=True)
class Finding:
    """One line of a structural validation report."""

    code: str
    passed: bool
    detail: str = ""


def _uniformity_findings(r: int, n: int, edges: Sequence[Sequence[int]]) -> List[Finding]:
    problems = []
    for idx, edge in enumerate(edges):
        if len(edge) != r:
            problems.append(f"edge {idx} has {len(edge)} vertices, expected {r}")
        elif len(set(edge)) != len(edge):
            problems.append(f"edge {idx} repeats a vertex")
        if any(v < 0 or v >= n for v in edge):
            problems.append(f"edge {idx} uses a vertex outside 0..{n - 1}")
    findings = [
        Finding(
            "uniformity",
            not problems,
            "; ".join(problems) or f"all {len(edges)} edges have {r} distinct vertices",
        )
    ]

    seen: Dict[FrozenSet[int], int] = {}
    duplicates = []
    for idx, edge in enumerate(edges):
        key = frozenset(edge)
        if key in seen:
            duplicates.append(f"edge {idx} repeats edge {seen[key]}")
        else:
            seen[key] = idx
    findings.append(Finding("distinct_edges", not duplicates, "; ".join(duplicates) or "no repeated edges"))
    return findings


def _incidence_graph(n: int, edges: Sequence[Sequence[int]]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(("v", v) for v in range(n))
    graph.add_nodes_from(("e", idx) for idx in range(len(edges)))
    for idx, edge in enumerate(edges):
        graph.add_edges_from((("v", v), ("e", idx)) for v in edge)
    return graph


def validate_edges(r: int, n: int, edges: Sequence[Sequence[int]]) -> List[Finding]:
    """
    Structural report for a raw edge list.

    Args:
        r: Expected uniformity.
        n: Vertex count.
        edges: Edges as vertex-id sequences (possibly non-uniform).

    Returns:
        Findings for uniformity, distinct edges, linearity, connectivity,
        acyclicity and the hypertree verdict. Later findings are skipped
        when the edge list is not even well formed.
    """
    findings = _uniformity_findings(r, n, edges)
    if not all(f.passed for f in findings):
        return findings

    shared = []
    owner: Dict[Tuple[int, int], int] = {}
    for idx, edge in enumerate(edges):
        for pair in combinations(sorted(edge), 2):
            if pair in owner:
                shared.append(f"edges {owner[pair]} and {idx} share vertices {pair[0]} and {pair[1]}")
            else:
                owner[pair] = idx
    findings.append(Finding("linearity", not shared, "; ".join(shared) or "any two edges share at most one vertex"))

    graph = _incidence_graph(n, edges)
    connected = nx.is_connected(graph)
    forest = nx.is_forest(graph)
    findings.append(Finding("connectivity", connected, "connected" if connected else "disconnected"))
    findings.append(
        Finding("acyclicity", forest, "no Berge cycles" if forest else "the incidence graph has a cycle")
    )
    is_tree = connected and forest
    detail = (
        f"hypertree with m={len(edges)}, m(r-1)={len(edges) * (r - 1)}=n-1"
        if is_tree
        else "incidence graph is not a tree"
    )
    findings.append(Finding("hypertree", is_tree, detail))
    return findings


@dataclass(frozen=True)
class Hypergraph:
    """
    An r-uniform hypergraph on vertices 0..n-1.

    Edges are stored as sorted vertex tuples in input order; edge ids
    are positions in ``edges``.
    """

    r: int
    n: int
    edges: Tuple[Edge, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        edges = tuple(tuple(sorted(int(v) for v in edge)) for edge in self.edges)
        object.__setattr__(self, "edges", edges)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(v) for v in range(self.n)))
        else:
            object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))

        if self.r < 2:
            raise HypergraphError(f"uniformity must be at least 2, got {self.r}")
        if self.n < 1:
            raise HypergraphError("a hypergraph needs at least one vertex")
        if len(self.labels) != self.n:
            raise HypergraphError(f"{len(self.labels)} labels for {self.n} vertices")
        if len(set(self.labels)) != self.n:
            raise HypergraphError("vertex labels must be distinct")
        failed = [f.detail for f in _uniformity_findings(self.r, self.n, edges) if not f.passed]
        if failed:
            raise HypergraphError("; ".join(failed))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> Tuple[Tuple[int, ...], ...]:
        """incidence[v] = ids of the edges containing v, ascending."""
        at: List[List[int]] = [[] for _ in range(self.n)]
        for idx, edge in enumerate(self.edges):
            for v in edge:
                at[v].append(idx)
        return tuple(tuple(ids) for ids in at)

    def edges_at(self, v: int) -> Tuple[int, ...]:
        return self.incidence[v]

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def vertex_of(self, label) -> int:
        """Vertex id for an input label."""
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise HypergraphError(f"unknown vertex label {label!r}") from None

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {label: v for v, label in enumerate(self.labels)}

    @cached_property
    def incidence_graph(self) -> nx.Graph:
        """Bipartite vertex/edge incidence graph; nodes are ('v', id) and ('e', id)."""
        return _incidence_graph(self.n, self.edges)

    def is_connected(self) -> bool:
        return nx.is_connected(self.incidence_graph)

    def components(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """(vertex ids, edge ids) of each connected component, ordered by least vertex."""
        parts = []
        for nodes in nx.connected_components(self.incidence_graph):
            vertices = tuple(sorted(i for kind, i in nodes if kind == "v"))
            edge_ids = tuple(sorted(i for kind, i in nodes if kind == "e"))
            parts.append((vertices, edge_ids))
        return sorted(parts)

    def sub_hypergraph(self, vertices: Iterable[int], edge_ids: Iterable[int]) -> "Hypergraph":
        """Relabel the given vertices to 0..k-1 (ascending) and keep the given edges."""
        vertices = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vertices)}
        try:
            edges = tuple(tuple(index[v] for v in self.edges[e]) for e in sorted(edge_ids))
        except KeyError as exc:
            raise SubgraphError(f"edge uses vertex {exc.args[0]} outside the kept vertex set") from None
        return Hypergraph(self.r, len(vertices), edges, tuple(self.labels[v] for v in vertices))

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "Hypergraph":
        edge_ids = sorted(edge_ids)
        vertices = {v for e in edge_ids for v in self.edges[e]}
        return self.sub_hypergraph(vertices, edge_ids)

    def induced(self, vertices: Iterable[int]) -> "Hypergraph":
        keep = set(vertices)
        edge_ids = [idx for idx, edge in enumerate(self.edges) if keep.issuperset(edge)]
        return self.sub_hypergraph(keep, edge_ids)


def validate(h: Hypergraph) -> List[Finding]:
    """Structural findings for an already uniform hypergraph."""
    return validate_edges(h.r, h.n, h.edges)


def is_hypertree(h: Hypergraph) -> bool:
    return nx.is_tree(h.incidence_graph)


def disjoint_union(parts: Sequence[Hypergraph]) -> Hypergraph:
    """Place the parts side by side, shifting vertex ids; labels are prefixed when they collide."""
    if not parts:
        raise HypergraphError("disjoint union of no hypergraphs")
    r = parts[0].r
    if any(part.r != r for part in parts):
        raise HypergraphError("all parts of a union must share the same uniformity")
    labels = [label for part in parts for label in part.labels]
    if len(set(labels)) != len(labels):
        labels = [f"{i}:{label}" for i, part in enumerate(parts) for label in part.labels]
    edges, offset = [], 0
    for part in parts:
        edges.extend(tuple(v + offset for v in edge) for edge in part.edges)
        offset += part.n
    return Hypergraph(r, offset, tuple(edges), tuple(labels))


@dataclass(frozen=True)
class Hypertree:
    """
    A hypertree with a root and a good ordering.

    labels[v] is the good-ordering label of vertex v (the root has 0),
    edge_roots[e] is the vertex of e closest to the root and levels[e]
    its distance from the root.
    """

    base: Hypergraph
    root: int
    labels: Tuple[int, ...]
    edge_roots: Tuple[int, ...]
    levels: Tuple[int, ...]

    @property
    def r(self) -> int:
        return self.base.r

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    @cached_property
    def order(self) -> Tuple[int, ...]:
        """order[label] = vertex carrying that label."""
        order = [0] * self.n
        for v, label in enumerate(self.labels):
            order[label] = v
        return tuple(order)

    @cached_property
    def relabeled(self) -> Hypergraph:
        """The hypertree with vertex ids replaced by good-ordering labels."""
        edges = tuple(tuple(self.labels[v] for v in edge) for edge in self.base.edges)
        return Hypergraph(self.r, self.n, edges, tuple(self.base.labels[v] for v in self.order))

    def edge_hat(self, e: int) -> Tuple[int, ...]:
        """Vertices of edge e other than its root."""
        return tuple(v for v in self.base.edges[e] if v != self.edge_roots[e])


def good_ordering(h: Hypergraph, root: int) -> Hypertree:
    """
    Label the vertices of a hypertree by a breadth-first good ordering.

    Edges are processed in BFS order of their roots (roots by label);
    the non-root vertices of each edge receive consecutive labels in
    ascending vertex id order.
    """
    if not 0 <= root < h.n:
        raise HypergraphError(f"root {root} is not a vertex")
    if not is_hypertree(h):
        raise NotAHypertreeError("the incidence graph is not a tree")

    labels = [-1] * h.n
    edge_roots = [-1] * h.m
    levels = [0] * h.m
    distance = {root: 0}
    labels[root] = 0
    next_label = 1
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in h.edges_at(v):
            if edge_roots[e] != -1:
                continue
            edge_roots[e] = v
            levels[e] = distance[v]
            for w in h.edges[e]:
                if w == v:
                    continue
                labels[w] = next_label
                next_label += 1
                distance[w] = distance[v] + 1
                queue.append(w)

    return Hypertree(h, root, tuple(labels), tuple(edge_roots), tuple(levels))


@dataclass(frozen=True)
class SubgraphHandle:
    """A connected subgraph: a single vertex, or a connected edge-induced subgraph."""

    vertex_set: Tuple[int, ...]
    edge_set: Tuple[int, ...]
    boundary_size: int

    @property
    def order(self) -> int:
        return len(self.vertex_set)

    @property
    def size(self) -> int:
        return len(self.edge_set)

    @property
    def is_vertex(self) -> bool:
        return not self.edge_set


def _boundary_edges(h: Hypergraph, vertex_set: Set[int], edge_set: Set[int]) -> FrozenSet[int]:
    touching = {e for v in vertex_set for e in h.edges_at(v)}
    return frozenset(e for e in touching if e not in edge_set and not vertex_set.issuperset(h.edges[e]))


def vertex_handle(h: Hypergraph, v: int) -> SubgraphHandle:
    return SubgraphHandle((v,), (), h.degree(v))


def edge_handle(h: Hypergraph, edge_ids: Iterable[int]) -> SubgraphHandle:
    edge_ids = tuple(sorted(set(edge_ids)))
    vertices = {v for e in edge_ids for v in h.edges[e]}
    size = len(_boundary_edges(h, vertices, set(edge_ids)))
    return SubgraphHandle(tuple(sorted(vertices)), edge_ids, size)


def boundary(h: Hypergraph, H: SubgraphHandle) -> FrozenSet[int]:
    """Edges of h meeting both V(H) and its complement."""
    if any(not 0 <= v < h.n for v in H.vertex_set) or any(not 0 <= e < h.m for e in H.edge_set):
        raise SubgraphError("handle refers to vertices or edges outside the hypergraph")
    vertices = set(H.vertex_set)
    if H.edge_set:
        spanned = {v for e in H.edge_set for v in h.edges[e]}
        if spanned != vertices:
            raise SubgraphError("vertex set is not the union of the handle's edges")
    elif len(vertices) != 1:
        raise SubgraphError("an edgeless handle must be a single vertex")
    result = _boundary_edges(h, vertices, set(H.edge_set))
    if len(result) != H.boundary_size:
        raise SubgraphError(f"cached boundary size {H.boundary_size} differs from {len(result)}")
    return result


def connected_subgraphs(t: Hypertree, cap: int = None) -> Iterator[SubgraphHandle]:
    """
    Stream every connected subgraph of t exactly once.

    Single vertices come first (by id), then connected edge sets grouped
    by their least edge id. Each group is grown from its anchor edge by
    adding only larger edges from the exclusive neighbourhood, so no set
    is produced twice.
    """
    h = t.base
    cap = settings.HYPERTREE_SUBGRAPH_CAP if cap is None else cap
    neighbours = [
        tuple(sorted({f for v in edge for f in h.edges_at(v)} - {e})) for e, edge in enumerate(h.edges)
    ]
    produced = 0

    def counted(handle: SubgraphHandle) -> SubgraphHandle:
        nonlocal produced
        produced += 1
        if produced > cap:
            raise CapExceededError("connected subgraph enumeration", cap)
        return handle

    def grow(subset: Tuple[int, ...], extension: List[int], anchor: int) -> Iterator[SubgraphHandle]:
        yield counted(edge_handle(h, subset))
        covered = set(subset).union(*(neighbours[e] for e in subset))
        extension = list(extension)
        while extension:
            w = extension.pop(0)
            fresh = [u for u in neighbours[w] if u > anchor and u not in covered]
            yield from grow(subset + (w,), sorted(set(extension + fresh)), anchor)

    for v in range(h.n):
        yield counted(vertex_handle(h, v))
    for anchor in range(h.m):
        yield from grow((anchor,), [u for u in neighbours[anchor] if u > anchor], anchor)
    logger.debug("enumerated %d connected subgraphs of a %d-edge hypertree", produced, h.m)


@dataclass(frozen=True)
class Decomposition:
    """Result of deleting vertices: the induced remainder and its components."""

    remaining: Hypergraph
    kept: Tuple[int, ...]
    components: Tuple[Hypergraph, ...]
    component_vertices: Tuple[Tuple[int, ...], ...]

    @property
    def isolated(self) -> int:
        return sum(1 for c in self.components if c.m == 0)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1


def delete_vertices(h: Hypergraph, removed: Iterable[int]) -> Decomposition:
    """
    Delete a vertex set and split what is left into connected pieces.

    Edges touching a deleted vertex disappear; ``component_vertices``
    gives, per component, the ids of its vertices in ``h``.
    """
    removed = set(removed)
    if any(not 0 <= v < h.n for v in removed):
        raise HypergraphError("cannot delete vertices that are not in the hypergraph")
    kept = tuple(v for v in range(h.n) if v not in removed)
    if not kept:
        raise HypergraphError("cannot delete every vertex")
    remaining = h.induced(kept)
    components, owners = [], []
    for vertices, edge_ids in remaining.components():
        components.append(remaining.sub_hypergraph(vertices, edge_ids))
        owners.append(tuple(kept[v] for v in vertices))
    return Decomposition(remaining, kept, tuple(components), tuple(owners))
