"""
Tests for hypergraphs, good orderings and connected subgraphs.
"""
import random
from itertools import combinations

from django.test import TestCase

from hypertrees.services import catalog
from hypertrees.services.exceptions import (
    CapExceededError,
    HypergraphError,
    NotAHypertreeError,
    SubgraphError,
)
from hypertrees.services.hypergraph import (
    Hypergraph,
    SubgraphHandle,
    boundary,
    connected_subgraphs,
    delete_vertices,
    disjoint_union,
    edge_handle,
    good_ordering,
    is_hypertree,
    validate,
    validate_edges,
    vertex_handle,
)


class HypergraphTests(TestCase):
    """Tests for the hypergraph value type and its validation."""

    def test_edges_are_sorted(self):
        """Test edges are stored as sorted tuples and labels default to ids."""
        h = Hypergraph(3, 4, ((2, 0, 1), (3, 2, 1)))
        self.assertEqual(h.edges, ((0, 1, 2), (1, 2, 3)))
        self.assertEqual(h.labels, ("0", "1", "2", "3"))
        self.assertEqual(h.incidence, ((0,), (0, 1), (0, 1), (1,)))

    def test_rejects_malformed_hypergraphs(self):
        """Test uniformity, ranges, duplicates and labels are enforced."""
        with self.assertRaises(HypergraphError):
            Hypergraph(1, 2, ())
        with self.assertRaises(HypergraphError):
            Hypergraph(3, 3, ((0, 1),))
        with self.assertRaises(HypergraphError):
            Hypergraph(3, 3, ((0, 1, 3),))
        with self.assertRaises(HypergraphError):
            Hypergraph(3, 3, ((0, 1, 2), (2, 1, 0)))
        with self.assertRaises(HypergraphError):
            Hypergraph(2, 2, ((0, 1),), ("a", "a"))
        with self.assertRaises(HypergraphError):
            Hypergraph(2, 2, ((0, 1),), ("a",))

    def test_vertex_of(self):
        """Test label lookup."""
        h = catalog.three_tree_of_order_eleven()
        self.assertEqual(h.vertex_of("7"), 6)
        self.assertEqual(h.vertex_of(7), 6)
        with self.assertRaises(HypergraphError):
            h.vertex_of("12")

    def test_validate_hypertree(self):
        """Test every finding passes for the 11-vertex 3-tree."""
        h = catalog.three_tree_of_order_eleven()
        findings = validate(h)
        self.assertEqual(
            [f.code for f in findings],
            ["uniformity", "distinct_edges", "linearity", "connectivity", "acyclicity", "hypertree"],
        )
        self.assertTrue(all(f.passed for f in findings))
        self.assertEqual(h.m * (h.r - 1), h.n - 1)

    def test_validate_non_linear(self):
        """Test two edges sharing two vertices break linearity and acyclicity."""
        findings = {f.code: f for f in validate_edges(3, 4, [(0, 1, 2), (0, 1, 3)])}
        self.assertFalse(findings["linearity"].passed)
        self.assertIn("share vertices 0 and 1", findings["linearity"].detail)
        self.assertFalse(findings["acyclicity"].passed)
        self.assertFalse(findings["hypertree"].passed)

    def test_validate_stops_at_malformed_edges(self):
        """Test later findings are skipped when uniformity fails."""
        findings = validate_edges(3, 5, [(0, 1, 2), (2, 3)])
        self.assertEqual([f.code for f in findings], ["uniformity", "distinct_edges"])
        self.assertFalse(findings[0].passed)
        self.assertIn("edge 1 has 2 vertices, expected 3", findings[0].detail)

    def test_disconnected(self):
        """Test a forest is not a hypertree."""
        forest = disjoint_union([catalog.single_edge(3), catalog.single_edge(3)])
        self.assertFalse(is_hypertree(forest))
        self.assertEqual(forest.labels[:4], ("0:1", "0:2", "0:3", "1:1"))
        self.assertEqual(len(forest.components()), 2)

    def test_induced(self):
        """Test induced subgraphs keep edges inside the vertex set only."""
        h = catalog.loose_path(2, 3)
        sub = h.induced([0, 1, 2, 3])
        self.assertEqual(sub.m, 1)
        self.assertEqual(sub.labels, ("1", "2", "3", "4"))
        with self.assertRaises(SubgraphError):
            h.sub_hypergraph([0, 1], [0])


class GoodOrderingTests(TestCase):
    """Tests for breadth-first good orderings."""

    def setUp(self):
        self.h = catalog.three_tree_of_order_eleven()

    def test_labels_from_root(self):
        """Test the labels, edge roots and levels of the 11-vertex tree."""
        t = good_ordering(self.h, 0)
        self.assertEqual(t.labels, (0, 3, 4, 1, 5, 6, 2, 7, 8, 9, 10))
        self.assertEqual(t.edge_roots, (0, 0, 3, 6, 6))
        self.assertEqual(t.levels, (0, 0, 1, 1, 1))
        self.assertEqual(t.order[2], 6)

    def test_edge_root_has_least_label(self):
        """Test every edge's root carries its least label, for every root."""
        for root in range(self.h.n):
            t = good_ordering(self.h, root)
            self.assertEqual(t.labels[root], 0)
            for e, edge in enumerate(t.relabeled.edges):
                self.assertEqual(edge[0], t.labels[t.edge_roots[e]])
            self.assertEqual(t.relabeled.labels[0], self.h.labels[root])

    def test_edge_hat(self):
        """Test the edge minus its root."""
        t = good_ordering(self.h, 0)
        self.assertEqual(t.edge_hat(2), (4, 5))

    def test_rejects_non_trees(self):
        """Test a cyclic or disconnected input cannot be ordered."""
        cyclic = Hypergraph(2, 3, ((0, 1), (1, 2), (0, 2)))
        with self.assertRaises(NotAHypertreeError):
            good_ordering(cyclic, 0)
        with self.assertRaises(HypergraphError):
            good_ordering(self.h, 11)


class ConnectedSubgraphTests(TestCase):
    """Tests for the connected subgraph enumeration."""

    def test_counts(self):
        """Test the number of connected subgraphs of small trees."""
        self.assertEqual(len(list(connected_subgraphs(good_ordering(catalog.single_edge(3), 0)))), 4)
        self.assertEqual(len(list(connected_subgraphs(good_ordering(catalog.loose_path(2, 3), 0)))), 8)
        handles = list(connected_subgraphs(good_ordering(catalog.three_tree_of_order_eleven(), 0)))
        self.assertEqual(len(handles), 32)
        self.assertEqual(sum(1 for handle in handles if handle.is_vertex), 11)

    def test_each_subgraph_once(self):
        """Test no edge set is produced twice and each is connected."""
        h = catalog.hyperstar(4, 3)
        handles = list(connected_subgraphs(good_ordering(h, 0)))
        edge_sets = [handle.edge_set for handle in handles if not handle.is_vertex]
        self.assertEqual(len(edge_sets), len(set(edge_sets)))
        # every nonempty subset of the four edges shares the centre
        self.assertEqual(len(edge_sets), 15)

    def test_matches_edge_subsets(self):
        """Test the enumeration against every connected subset of edges."""
        h = catalog.random_hypertree(random.Random(8), 3, 6)
        found = {handle.edge_set for handle in connected_subgraphs(good_ordering(h, 0)) if not handle.is_vertex}
        expected = {
            subset
            for size in range(1, h.m + 1)
            for subset in combinations(range(h.m), size)
            if h.edge_subgraph(subset).is_connected()
        }
        self.assertEqual(found, expected)

    def test_root_independent(self):
        """Test the enumerated family does not depend on the root."""
        h = catalog.three_tree_of_order_eleven()
        first = {handle.edge_set for handle in connected_subgraphs(good_ordering(h, 0))}
        second = {handle.edge_set for handle in connected_subgraphs(good_ordering(h, 9))}
        self.assertEqual(first, second)

    def test_cap(self):
        """Test the enumeration stops with an error at the cap."""
        t = good_ordering(catalog.three_tree_of_order_eleven(), 0)
        with self.assertRaises(CapExceededError):
            list(connected_subgraphs(t, cap=10))

    def test_boundary(self):
        """Test boundary edges of vertex and edge handles."""
        h = catalog.loose_path(2, 3)
        self.assertEqual(boundary(h, vertex_handle(h, 2)), frozenset({0, 1}))
        self.assertEqual(boundary(h, edge_handle(h, [0])), frozenset({1}))
        self.assertEqual(boundary(h, edge_handle(h, [0, 1])), frozenset())
        self.assertEqual(edge_handle(h, [1]).vertex_set, (2, 3, 4))

    def test_boundary_rejects_bad_handles(self):
        """Test handles that do not describe a subgraph are refused."""
        h = catalog.loose_path(2, 3)
        with self.assertRaises(SubgraphError):
            boundary(h, SubgraphHandle((0, 1), (), 0))
        with self.assertRaises(SubgraphError):
            boundary(h, SubgraphHandle((0, 1, 2, 3), (0,), 1))
        with self.assertRaises(SubgraphError):
            boundary(h, SubgraphHandle((0, 1, 2), (0,), 0))


class DeleteVerticesTests(TestCase):
    """Tests for vertex deletion."""

    def test_delete_branch_vertex(self):
        """Test deleting vertex 7 of the 11-vertex tree leaves two edges and four isolated vertices."""
        h = catalog.three_tree_of_order_eleven()
        result = delete_vertices(h, [h.vertex_of("7")])
        self.assertEqual(len(result.components), 6)
        self.assertEqual(result.isolated, 4)
        self.assertFalse(result.is_connected)
        self.assertEqual(result.component_vertices[0], (0, 1, 2))

    def test_delete_leaf_edge(self):
        """Test deleting the two leaves of an edge keeps the rest connected."""
        h = catalog.three_tree_of_order_eleven()
        result = delete_vertices(h, [h.vertex_of("10"), h.vertex_of("11")])
        self.assertTrue(result.is_connected)
        self.assertEqual(result.remaining.m, 4)

    def test_delete_everything(self):
        """Test deleting all vertices is refused."""
        h = catalog.single_edge(3)
        with self.assertRaises(HypergraphError):
            delete_vertices(h, [0, 1, 2])
        with self.assertRaises(HypergraphError):
            delete_vertices(h, [5])
