"""
Named hypergraph constructions used by the verification suite and tests.

Catalog hypergraphs carry 1-based string labels so that printed
subgraphs read the way they are usually drawn.
"""
import random
from typing import List

from .hypergraph import Hypergraph, disjoint_union


def _labels(n: int):
    return tuple(str(v + 1) for v in range(n))


def single_vertex(r: int) -> Hypergraph:
    return Hypergraph(r, 1, (), ("1",))


def single_edge(r: int) -> Hypergraph:
    return Hypergraph(r, r, (tuple(range(r)),), _labels(r))


def loose_path(m: int, r: int) -> Hypergraph:
    """m edges in a row, consecutive edges sharing one vertex."""
    edges = tuple(tuple(range(i * (r - 1), i * (r - 1) + r)) for i in range(m))
    n = m * (r - 1) + 1
    return Hypergraph(r, n, edges, _labels(n))


def hyperstar(k: int, r: int) -> Hypergraph:
    """k edges sharing vertex 0 (label "1") and nothing else."""
    edges = tuple((0,) + tuple(range(1 + i * (r - 1), 1 + (i + 1) * (r - 1))) for i in range(k))
    n = k * (r - 1) + 1
    return Hypergraph(r, n, edges, _labels(n))


def three_tree_of_order_eleven() -> Hypergraph:
    """
    The 3-tree on vertices 1..11 with edges
    e1={1,4,7}, e2={1,2,3}, e3={4,5,6}, e4={7,8,9}, e5={7,10,11}.
    """
    edges = [(1, 4, 7), (1, 2, 3), (4, 5, 6), (7, 8, 9), (7, 10, 11)]
    return Hypergraph(3, 11, tuple(tuple(v - 1 for v in edge) for edge in edges), _labels(11))


def path_graph(n: int) -> Hypergraph:
    """The 2-graph path on n vertices."""
    return Hypergraph(2, n, tuple((i, i + 1) for i in range(n - 1)), _labels(n))


def star_graph(k: int) -> Hypergraph:
    return hyperstar(k, 2)


def random_hypertree(rng: random.Random, r: int, m: int) -> Hypergraph:
    """Grow a hypertree by attaching each new edge at a uniformly chosen existing vertex."""
    n, edges = 1, []
    for _ in range(m):
        anchor = rng.randrange(n)
        edges.append((anchor,) + tuple(range(n, n + r - 1)))
        n += r - 1
    return Hypergraph(r, n, tuple(edges), _labels(n))


def random_tree(rng: random.Random, n: int) -> Hypergraph:
    return random_hypertree(rng, 2, n - 1)


def random_hypergraph(rng: random.Random, r: int, n: int, m: int) -> Hypergraph:
    """m distinct random r-subsets of n vertices (requires enough subsets to exist)."""
    chosen: List[tuple] = []
    seen = set()
    while len(chosen) < m:
        edge = tuple(sorted(rng.sample(range(n), r)))
        if edge not in seen:
            seen.add(edge)
            chosen.append(edge)
    return Hypergraph(r, n, tuple(chosen), _labels(n))


def random_forest(rng: random.Random, r: int, sizes: List[int]) -> Hypergraph:
    return disjoint_union([random_hypertree(rng, r, m) for m in sizes])
