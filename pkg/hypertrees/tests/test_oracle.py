"""
Tests for the Macaulay resultant oracle and the brute-force engines.
"""
import random
from unittest.mock import patch

from django.test import TestCase, override_settings, tag

from hypertrees.services import catalog
from hypertrees.services.exceptions import CapExceededError, HypergraphError, OracleError
from hypertrees.services.hypergraph import good_ordering
from hypertrees.services.oracle import (
    adjacency_charpoly_2graph,
    brute_matchings,
    build_macaulay_system,
    check_homogeneity,
    determinant_at,
    determinant_polynomial,
    eigen_system,
    interpolate_integer,
    macaulay_charpoly,
    macaulay_determinants,
    ordering_gcd,
    resolve_ordering,
)
from hypertrees.services.poly import IntPoly, LAM, expand
from hypertrees.services.spectra import charpoly_hypertree

SINGLE_EDGE = IntPoly({12: 1, 9: -3, 6: 3, 3: -1})


def product_formula(h):
    return expand(charpoly_hypertree(good_ordering(h, 0)).factored)


class EigenSystemTests(TestCase):
    """Tests for the eigen-equations and orderings."""

    def test_single_edge_equations(self):
        """Test F_0 = l x_0^2 - x_1 x_2."""
        equations = eigen_system(catalog.single_edge(3))
        self.assertEqual(equations[0].leading, (2, 0, 0))
        self.assertEqual(equations[0].terms, ((-1, (0, 1, 1)),))
        self.assertEqual(eigen_system(catalog.single_vertex(3))[0].terms, ())

    def test_resolve_ordering(self):
        """Test named orderings, label sequences and priority tuples."""
        h = catalog.single_edge(3)
        self.assertEqual(resolve_ordering(h, "descending"), (0, 1, 2))
        self.assertEqual(resolve_ordering(h, None), (0, 1, 2))
        self.assertEqual(resolve_ordering(h, "ascending"), (2, 1, 0))
        self.assertEqual(resolve_ordering(h, ["1", "3", "2"]), (2, 0, 1))
        self.assertEqual(resolve_ordering(h, (1, 2, 0)), (1, 2, 0))
        with self.assertRaises(HypergraphError):
            resolve_ordering(h, "sideways")
        with self.assertRaises(HypergraphError):
            resolve_ordering(h, (0, 0, 1))


class MacaulaySystemTests(TestCase):
    """Tests for the Macaulay matrix of one 3-edge."""

    def setUp(self):
        self.h = catalog.single_edge(3)
        self.system = build_macaulay_system(self.h)

    def test_shape(self):
        """Test 15 rows, 12 reduced, and the class sizes."""
        self.assertEqual(self.system.size, 15)
        self.assertEqual(self.system.d, 4)
        self.assertEqual(self.system.reduced_count, 12)
        self.assertEqual(self.system.class_sizes(), {0: 4, 1: 5, 2: 6})

    def test_determinants(self):
        """Test D = l^6 (l^3 - 1)^3 and D' = l^3."""
        result = macaulay_determinants(self.h)
        self.assertEqual(result.full, LAM ** 6 * IntPoly({3: 1, 0: -1}) ** 3)
        self.assertEqual(result.extraneous, LAM ** 3)
        self.assertEqual(result.charpoly, SINGLE_EDGE)

    def test_dense_determinant_agrees(self):
        """Test the block-wise determinant against a dense evaluation."""
        full = determinant_polynomial(self.system)
        for value in (-2, 0, 3):
            self.assertEqual(determinant_at(self.system, value), full(value))

    def test_homogeneity(self):
        """Test scaling F_2 by 2 scales D by 2^6."""
        check = check_homogeneity(self.system, 2, 2, 3)
        self.assertEqual(check.class_size, 6)
        self.assertTrue(check.holds)

    def test_cap(self):
        """Test the matrix cap, passed in and from settings."""
        with self.assertRaises(CapExceededError):
            build_macaulay_system(self.h, cap=10)
        with override_settings(HYPERTREE_MACAULAY_CAP=10):
            with self.assertRaises(CapExceededError):
                macaulay_charpoly(self.h)


class MacaulayCharPolyTests(TestCase):
    """Tests for the oracle characteristic polynomial."""

    def test_single_vertex(self):
        """Test a lone vertex gives l."""
        self.assertEqual(macaulay_charpoly(catalog.single_vertex(3)), LAM)

    def test_single_edge(self):
        """Test one 3-edge matches the product formula."""
        self.assertEqual(macaulay_charpoly(catalog.single_edge(3)), SINGLE_EDGE)
        self.assertEqual(product_formula(catalog.single_edge(3)), SINGLE_EDGE)

    def test_result_does_not_depend_on_settings(self):
        """Test orderings, evaluation points and threads leave the result alone."""
        h = catalog.single_edge(3)
        self.assertEqual(macaulay_charpoly(h, ordering="ascending"), SINGLE_EDGE)
        self.assertEqual(macaulay_charpoly(h, ordering=["2", "3", "1"]), SINGLE_EDGE)
        self.assertEqual(macaulay_charpoly(h, point_offset=7), SINGLE_EDGE)
        self.assertEqual(macaulay_charpoly(h, workers=2), SINGLE_EDGE)

    def test_two_graphs(self):
        """Test r = 2 reduces to det(l I - A)."""
        rng = random.Random(3)
        for _ in range(5):
            tree = catalog.random_tree(rng, rng.randint(2, 7))
            self.assertEqual(macaulay_charpoly(tree), adjacency_charpoly_2graph(tree))
        self.assertEqual(adjacency_charpoly_2graph(catalog.path_graph(3)), IntPoly({3: 1, 1: -2}))

    def test_non_tree_hypergraph(self):
        """Test the oracle accepts a uniform hypergraph that is not a tree."""
        h = catalog.random_hypergraph(random.Random(5), 2, 4, 5)
        self.assertEqual(macaulay_charpoly(h).degree, 4)

    def test_vanishing_minor(self):
        """Test an identically zero D' is logged and refused."""
        with patch(
            "hypertrees.services.oracle.determinant_polynomial",
            side_effect=[LAM, IntPoly.zero()],
        ):
            with self.assertLogs("hypertrees.services.oracle", level="WARNING"):
                with self.assertRaises(OracleError):
                    macaulay_charpoly(catalog.single_edge(3))

    def test_ordering_gcd(self):
        """Test the gcd over orderings keeps an extra l^3 for one edge."""
        self.assertEqual(ordering_gcd(catalog.single_edge(3)), LAM ** 3 * SINGLE_EDGE)

    @tag("slow")
    def test_two_edge_path(self):
        """Test the 210-row system of the two-edge path."""
        h = catalog.loose_path(2, 3)
        self.assertEqual(macaulay_charpoly(h), product_formula(h))

    @tag("slow")
    def test_single_four_edge(self):
        """Test the 220-row system of one 4-edge."""
        h = catalog.single_edge(4)
        result = macaulay_determinants(h)
        self.assertEqual(result.system.size, 220)
        self.assertEqual(result.charpoly, product_formula(h))
        self.assertEqual(result.charpoly.degree, 4 * 3 ** 3)


class InterpolationTests(TestCase):
    """Tests for exact interpolation."""

    def test_interpolate(self):
        """Test recovering l^2 + 1 from three values."""
        self.assertEqual(interpolate_integer([0, 1, 2], [1, 2, 5]), IntPoly({2: 1, 0: 1}))
        self.assertEqual(interpolate_integer([5, 6, 7], [26, 37, 50]), IntPoly({2: 1, 0: 1}))

    def test_non_integer_coefficients(self):
        """Test a non-integer interpolant is an error."""
        with self.assertRaises(OracleError):
            interpolate_integer([0, 2], [0, 1])


class BruteMatchingTests(TestCase):
    """Tests for exhaustive matching enumeration."""

    def test_counts(self):
        """Test the 11-vertex tree."""
        self.assertEqual(brute_matchings(catalog.three_tree_of_order_eleven()).counts, (1, 5, 5, 2))

    def test_limit(self):
        """Test the edge limit."""
        with self.assertRaises(CapExceededError):
            brute_matchings(catalog.hyperstar(5, 3), limit=4)

    def test_adjacency_needs_a_graph(self):
        """Test adjacency matrices are for 2-graphs only."""
        with self.assertRaises(HypergraphError):
            adjacency_charpoly_2graph(catalog.single_edge(3))
