"""
Product formula versus oracle checks behind ``hypertree verify``.

The small suite runs in seconds. The full suite adds the 210 and 220
row Macaulay systems, the 11-vertex worked example, the toppling census
on the two-edge path and the randomized sweeps at full size.
"""
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Dict, List, Tuple

from .catalog import (
    loose_path,
    random_hypergraph,
    random_hypertree,
    random_tree,
    single_edge,
    single_vertex,
    three_tree_of_order_eleven,
)
from .exceptions import HypertreeError
from .hypergraph import connected_subgraphs, good_ordering
from .matching import matching_counts, matching_polynomial, power_hypergraph, power_tree_matching
from .oracle import adjacency_charpoly_2graph, brute_matchings, macaulay_charpoly
from .poly import FactoredPoly, IntPoly, divides, expand, gcd
from .spectra import (
    charpoly_hypertree,
    charpoly_union,
    check_divisibility,
    loose_path_crosscheck,
)
from .toppling import (
    build_toppled_digraph,
    parking_functions,
    resultant_from_digraph,
    subgraph_config_census,
    topple_summary,
)

logger = logging.getLogger(__name__)

SUITES = ("small", "full")

ELEVEN_VERTEX_TREE_CHARPOLY = (
    "l^2192 * (l^11 - 5*l^8 + 5*l^5 - 2*l^2)^243 * (l^9 - 4*l^6 + 3*l^3 - 1)^162"
    " * (l^9 - 4*l^6 + 2*l^3)^162 * (l^7 - 3*l^4 + l)^135 * (l^7 - 3*l^4)^27"
    " * (l^5 - 2*l^2)^180 * (l^3 - 1)^483"
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


Check = Callable[[random.Random], Tuple[bool, Dict[str, object]]]
_REGISTRY: List[Tuple[str, str, Check]] = []


def check(suite: str):
    def register(func: Check) -> Check:
        _REGISTRY.append((suite, func.__name__, func))
        return func

    return register


def _tree_charpoly(h) -> FactoredPoly:
    return charpoly_hypertree(good_ordering(h, 0)).factored


@check("small")
def single_vertex_oracle(rng):
    result = macaulay_charpoly(single_vertex(3))
    return result == IntPoly.lam(), {"oracle": str(result)}


@check("small")
def single_edge_oracle(rng):
    h = single_edge(3)
    oracle = macaulay_charpoly(h)
    product = expand(_tree_charpoly(h))
    expected = IntPoly({12: 1, 9: -3, 6: 3, 3: -1})
    return oracle == product == expected, {"oracle": str(oracle), "product": str(product)}


@check("small")
def single_edge_resultant_ratio(rng):
    h = single_edge(3)
    ratio = resultant_from_digraph(build_toppled_digraph(h))
    product = expand(_tree_charpoly(h))
    return ratio.resultant == product, {"digraph": str(ratio.full), "non_reduced": str(ratio.extraneous)}


def _two_graph_sweep(rng, count):
    failures = []
    for _ in range(count):
        tree = random_tree(rng, rng.randint(2, 12))
        factored = _tree_charpoly(tree)
        phi = matching_polynomial(tree)
        if factored != FactoredPoly.from_poly(phi) or expand(factored) != adjacency_charpoly_2graph(tree):
            failures.append([list(edge) for edge in tree.edges])
    return not failures, {"trees": count, "failures": failures}


@check("small")
def two_graph_trees(rng):
    return _two_graph_sweep(rng, 20)


@check("small")
def parking_counts(rng):
    counts = {length: sum(1 for _ in parking_functions(length)) for length in range(1, 6)}
    return all(c == (n + 1) ** (n - 1) for n, c in counts.items()), {"counts": counts}


def _matching_sweep(rng, count):
    mismatches = 0
    for _ in range(count):
        r = rng.randint(2, 4)
        n = rng.randint(r, 10)
        m = rng.randint(1, 8)
        h = random_hypergraph(rng, r, n, min(m, comb(n, r)))
        if matching_counts(h).counts != brute_matchings(h).counts:
            mismatches += 1
    return mismatches == 0, {"instances": count, "mismatches": mismatches}


@check("small")
def matching_engine(rng):
    return _matching_sweep(rng, 25)


def _degree_sweep(rng, count):
    failures = []
    for _ in range(count):
        r = rng.randint(2, 5)
        tree = random_hypertree(rng, r, rng.randint(1, min(10, 30 // (r - 1))))
        report = charpoly_hypertree(good_ordering(tree, 0))
        degree_ok = report.total_degree == tree.n * (r - 1) ** (tree.n - 1)
        if not degree_ok or report.nullity != report.factored.valuation:
            failures.append({"r": r, "m": tree.m})
    return not failures, {"trees": count, "failures": failures}


@check("small")
def degree_identity(rng):
    return _degree_sweep(rng, 10)


@check("small")
def single_edge_toppling(rng):
    summary = topple_summary(single_edge(3))
    passed = (
        summary.single_edge_cycles_only
        and summary.critical_components_match
        and summary.cycle_lengths_divisible
        and summary.critical_count == 3
    )
    return bool(passed), {"configs": summary.config_count, "critical": summary.critical_count}


@check("full")
def two_edge_path_oracle(rng):
    h = loose_path(2, 3)
    oracle = macaulay_charpoly(h)
    product = expand(_tree_charpoly(h))
    return oracle == product, {"degree": oracle.degree}


@check("full")
def four_edge_oracle(rng):
    h = single_edge(4)
    oracle = macaulay_charpoly(h)
    product = expand(_tree_charpoly(h))
    return oracle == product, {"degree": oracle.degree}


@check("full")
def eleven_vertex_tree_golden(rng):
    report = charpoly_hypertree(good_ordering(three_tree_of_order_eleven(), 0))
    printed = str(report.factored)
    return (
        printed == ELEVEN_VERTEX_TREE_CHARPOLY and report.total_degree == 11264,
        {"subgraphs": len(report.per_subgraph), "degree": report.total_degree, "nullity": report.nullity},
    )


@check("full")
def eleven_vertex_tree_counterexample(rng):
    h = three_tree_of_order_eleven()
    t = good_ordering(h, 0)
    removed = h.vertex_of("7")
    keep = [v for v in range(h.n) if v != removed]
    verdict = check_divisibility(t, keep)
    subgraph = verdict.subgraph_charpoly
    expected = FactoredPoly([(IntPoly.lam(), 2816), (IntPoly({3: 1, 0: -1}), 768)])
    passed = subgraph == expected and verdict.matching_divides and not verdict.charpoly_divides
    return passed, {"subgraph": str(subgraph), "charpoly_divides": verdict.charpoly_divides}


@check("full")
def loose_path_closed_forms(rng):
    disagreements = [
        (m, r) for r in (3, 4) for m in range(1, 6) if not loose_path_crosscheck(m, r).agree
    ]
    return not disagreements, {"disagreements": disagreements}


@check("full")
def two_edge_path_toppling(rng):
    t = good_ordering(loose_path(2, 3), 0)
    summary = topple_summary(t.base)
    census = [
        (handle.vertex_set, subgraph_config_census(t, handle))
        for handle in connected_subgraphs(t)
    ]
    mismatched = [list(vertices) for vertices, result in census if result.count != result.expected]
    passed = (
        summary.single_edge_cycles_only
        and summary.critical_components_match
        and summary.critical_count == 9
        and not mismatched
    )


@check("full")
def two_graph_trees_sweep(rng):
    return _two_graph_sweep(rng, 100)


@check("full")
def matching_engine_sweep(rng):
    return _matching_sweep(rng, 100)


@check("full")
def degree_and_nullity_sweep(rng):
    return _degree_sweep(rng, 200)


@check("full")
def four_uniform_deletions(rng):
    failures = []
    for _ in range(50):
        tree = random_hypertree(rng, 4, rng.randint(1, 4))
        removed = set(rng.sample(range(tree.n), rng.randint(1, tree.n - 1)))
        keep = [v for v in range(tree.n) if v not in removed]
        verdict = check_divisibility(good_ordering(tree, 0), keep)
        if not (verdict.corollary_predicts and verdict.charpoly_divides):
            failures.append({"edges": [list(edge) for edge in tree.edges], "keep": keep})
    return not failures, {"instances": 50, "failures": failures}


@check("full")
def three_uniform_connected_subtrees(rng):
    failures = []
    for _ in range(50):
        tree = random_hypertree(rng, 3, rng.randint(1, 5))
        t = good_ordering(tree, 0)
        handles = [handle for handle in connected_subgraphs(t) if handle.order < tree.n]
        keep = list(rng.choice(handles).vertex_set)
        verdict = check_divisibility(t, keep)
        if not (verdict.connected and verdict.charpoly_divides and verdict.exponents_dominated):
            failures.append({"edges": [list(edge) for edge in tree.edges], "keep": keep})
    return not failures, {"instances": 50, "failures": failures}


@check("full")
def power_tree_matchings(rng):
    mismatches = []
    for _ in range(30):
        tree = random_tree(rng, rng.randint(2, 10))
        for r in (3, 4, 5):
            if power_tree_matching(tree, r) != matching_polynomial(power_hypergraph(tree, r)):
                mismatches.append({"r": r, "edges": [list(edge) for edge in tree.edges]})
    return not mismatches, {"trees": 30, "mismatches": mismatches}


def _brute_connected_edge_sets(h) -> set:
    found = set()
    for size in range(1, h.m + 1):
        for subset in combinations(range(h.m), size):
            if h.edge_subgraph(subset).is_connected():
                found.add(subset)
    return found


@check("full")
def connected_subgraph_enumeration(rng):
    failures = []
    for _ in range(30):
        r = rng.randint(2, 4)
        tree = random_hypertree(rng, r, rng.randint(1, 6))
        handles = list(connected_subgraphs(good_ordering(tree, 0)))
        edge_sets = [handle.edge_set for handle in handles if not handle.is_vertex]
        vertices = [handle.vertex_set for handle in handles if handle.is_vertex]
        sound = len(edge_sets) == len(set(edge_sets)) and set(edge_sets) == _brute_connected_edge_sets(tree)
        if not sound or sorted(vertices) != [(v,) for v in range(tree.n)]:
            failures.append({"r": r, "edges": [list(edge) for edge in tree.edges]})
    return not failures, {"trees": 30, "failures": failures}


def _random_poly(rng) -> IntPoly:
    coefficients = [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))]
    return IntPoly.from_coefficients(coefficients + [rng.choice((-2, -1, 1, 2))])


@check("full")
def factored_arithmetic(rng):
    problems = Counter()
    for _ in range(100):
        a, b = _random_poly(rng), _random_poly(rng)
        if rng.random() < 0.5:
            b = a * b
        if divides(FactoredPoly.from_poly(a), FactoredPoly.from_poly(b)) != a.divides(b):
            problems["divides"] += 1
        g = gcd(a, b)
        if g != gcd(b, a) or not (g.divides(a) and g.divides(b)):
            problems["gcd"] += 1
        factors = [(_random_poly(rng), rng.randint(1, 5)) for _ in range(4)]
        if FactoredPoly(factors) != FactoredPoly(rng.sample(factors, len(factors))):
            problems["canonical_form"] += 1
    for _ in range(10):
        parts = [random_hypertree(rng, 3, rng.randint(0, 2)) for _ in range(3)]
        pairs = [(part, _tree_charpoly(part)) for part in parts]
        if charpoly_union(pairs) != charpoly_union(rng.sample(pairs, len(pairs))):
            problems["union_order"] += 1
    return not problems, {"problems": dict(problems)}


def run_suite(suite: str = "small", seed: int = 0) -> SuiteReport:
    """
    Run every check of ``suite`` ("full" includes the small checks).

    Each check gets its own generator seeded from ``seed`` so that
    results do not depend on which other checks ran.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    selected = [item for item in _REGISTRY if suite == "full" or item[0] == "small"]
    results = []
    for _, name, func in selected:
        rng = random.Random(f"{seed}:{name}")
        try:
            passed, detail = func(rng)
        except HypertreeError as exc:
            passed, detail = False, {"error": str(exc)}
        if not passed:
            logger.warning("verify check %s failed: %s", name, detail)
        results.append(CheckResult(name, bool(passed), detail))
    return SuiteReport(suite, seed, tuple(results))
