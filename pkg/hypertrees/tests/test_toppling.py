"""
Tests for chip-firing, toppled digraphs and critical configurations.
"""
import random

from django.test import TestCase, override_settings, tag

from hypertrees.services import catalog
from hypertrees.services.exceptions import CapExceededError, HypergraphError, TopplingError
from hypertrees.services.hypergraph import connected_subgraphs, edge_handle, good_ordering
from hypertrees.services.poly import IntPoly, LAM, expand
from hypertrees.services.spectra import charpoly_hypertree
from hypertrees.services.toppling import (
    Configuration,
    IncidenceVector,
    build_toppled_digraph,
    chip_total,
    classify,
    configuration_count,
    critical_configurations,
    critical_scc_check,
    cycle_census,
    digraph_charpoly,
    has_hop,
    identity_priority,
    incidence_matrix_kernel,
    is_critical,
    is_parking,
    is_single_edge_trace,
    iter_configurations,
    parking_functions,
    priority_from_sequence,
    rank_configuration,
    resultant_from_digraph,
    root_gcd,
    subgraph_config_census,
    topple,
    topple_summary,
    toppling_trace,
    unrank_configuration,
)

SINGLE_EDGE_DIGRAPH = LAM ** 6 * IntPoly({3: 1, 0: -1}) ** 3


class ConfigurationTests(TestCase):
    """Tests for configurations and their indexing."""

    def test_counts(self):
        """Test chip totals and configuration counts."""
        self.assertEqual(chip_total(catalog.single_edge(3)), 4)
        self.assertEqual(configuration_count(3, 4), 15)
        self.assertEqual(configuration_count(5, 6), 210)
        self.assertEqual(configuration_count(4, 9), 220)
        self.assertEqual(configuration_count(9, 10), 43758)

    def test_rank_is_a_bijection(self):
        """Test ranks enumerate 0..N-1 and unranking inverts them."""
        configs = list(iter_configurations(4, 5))
        ranks = sorted(rank_configuration(c) for c in configs)
        self.assertEqual(ranks, list(range(configuration_count(4, 5))))
        for chips in configs:
            self.assertEqual(unrank_configuration(rank_configuration(chips), 4, 5), chips)

    def test_negative_chips(self):
        """Test configurations cannot hold negative chips."""
        with self.assertRaises(TopplingError):
            Configuration((2, -1, 3))
        self.assertEqual(Configuration([1, 2, 1]).total, 4)


class TopplingRuleTests(TestCase):
    """Tests for classification and toppling on one 3-edge."""

    def setUp(self):
        self.h = catalog.single_edge(3)
        self.priority = identity_priority(3)

    def test_classify(self):
        """Test the class is the highest-priority vertex with r-1 chips."""
        self.assertEqual(classify(Configuration((2, 1, 1)), self.priority, 3), 0)
        self.assertEqual(classify(Configuration((2, 2, 0)), self.priority, 3), 1)
        self.assertEqual(classify(Configuration((2, 2, 0)), (2, 0, 1), 3), 0)
        with self.assertRaises(TopplingError):
            classify(Configuration((1, 1, 1)), self.priority, 3)

    def test_topple_cycle(self):
        """Test (2,1,1) -> (0,2,2) -> (1,3,0) -> (2,1,1)."""
        cfg = Configuration((2, 1, 1))
        cfg = topple(self.h, cfg, 0, 0, self.priority)
        self.assertEqual(cfg.chips, (0, 2, 2))
        cfg = topple(self.h, cfg, 2, 0, self.priority)
        self.assertEqual(cfg.chips, (1, 3, 0))
        cfg = topple(self.h, cfg, 1, 0, self.priority)
        self.assertEqual(cfg.chips, (2, 1, 1))

    def test_illegal_topplings(self):
        """Test toppling outside the designated vertex or edge is refused."""
        with self.assertRaises(TopplingError):
            topple(self.h, Configuration((2, 2, 0)), 0, 0, self.priority)
        with self.assertRaises(TopplingError):
            topple(self.h, Configuration((1, 1, 2)), 0, 0, self.priority)
        path = catalog.loose_path(2, 3)
        with self.assertRaises(TopplingError):
            topple(path, Configuration((6, 0, 0, 0, 0)), 0, 1, identity_priority(5))

    def test_edge_indicator_is_in_the_kernel(self):
        """Test toppling every vertex of an edge once changes nothing."""
        cfg = Configuration((2, 1, 1))
        self.assertEqual(IncidenceVector.edge_indicator(self.h, 0).apply(self.h, cfg), cfg)
        with self.assertRaises(TopplingError):
            IncidenceVector.from_counts({(0, 0): -1})

    def test_priority_from_sequence(self):
        """Test labels are read from the largest variable down."""
        self.assertEqual(priority_from_sequence(self.h, ["1", "3", "2"]), (2, 0, 1))
        with self.assertRaises(HypergraphError):
            priority_from_sequence(self.h, ["1", "2"])
        with self.assertRaises(HypergraphError):
            priority_from_sequence(self.h, ["1", "1", "2"])


class ToppledDigraphTests(TestCase):
    """Tests for the toppled digraph of one 3-edge."""

    def setUp(self):
        self.h = catalog.single_edge(3)
        self.dg = build_toppled_digraph(self.h)

    def test_shape(self):
        """Test 15 configurations, one arc each, three 3-cycles."""
        self.assertEqual(len(self.dg), 15)
        self.assertEqual(self.dg.graph.number_of_edges(), 15)
        self.assertEqual(sorted(len(c) for c in self.dg.components if len(c) > 1), [3, 3, 3])
        self.assertEqual(sum(not self.dg.is_reduced(node) for node in range(15)), 3)

    def test_cycle_census(self):
        """Test every cycle has length 3 and is a single-edge trace."""
        census = cycle_census(self.dg)
        self.assertEqual(census.lengths, {3: 3})
        self.assertEqual(census.scc_sizes, {1: 6, 3: 3})
        self.assertEqual(census.single_edge_cycles, 3)
        self.assertEqual(census.hop_cycles, 0)
        self.assertFalse(census.partial)
        self.assertTrue(census.all_multiples_of(3))

    def test_trace_of_a_cycle(self):
        """Test the trace of a 3-cycle is the edge indicator."""
        start = self.dg.index_of((2, 1, 1))
        cycle = [start, self.dg.index_of((0, 2, 2)), self.dg.index_of((1, 3, 0))]
        trace = toppling_trace(self.dg, cycle)
        self.assertEqual(trace, [(0, 0), (2, 0), (1, 0)])
        self.assertTrue(is_single_edge_trace(self.h, trace))
        self.assertFalse(has_hop(self.h, trace))
        self.assertEqual(IncidenceVector.from_trace(trace), IncidenceVector.edge_indicator(self.h, 0))

    def test_partial_census(self):
        """Test the cycle cap stops the census and says so."""
        with self.assertLogs("hypertrees.services.toppling", level="INFO"):
            census = cycle_census(self.dg, cycle_cap=1)
        self.assertTrue(census.partial)
        self.assertEqual(census.cycles, 1)

    def test_characteristic_polynomials(self):
        """Test D = l^6 (l^3 - 1)^3, D' = l^3 and their ratio."""
        self.assertEqual(digraph_charpoly(self.dg.graph, 3), SINGLE_EDGE_DIGRAPH)
        self.assertEqual(digraph_charpoly(self.dg.graph), SINGLE_EDGE_DIGRAPH)
        ratio = resultant_from_digraph(self.dg)
        self.assertEqual(ratio.extraneous, LAM ** 3)
        self.assertEqual(ratio.resultant, IntPoly({12: 1, 9: -3, 6: 3, 3: -1}))

    def test_dense_cap(self):
        """Test the dense characteristic polynomial respects its cap."""
        with self.assertRaises(CapExceededError):
            digraph_charpoly(self.dg.graph, dense_cap=2)

    def test_root_gcd(self):
        """Test every root gives the same digraph for one edge."""
        self.assertEqual(root_gcd(self.h), SINGLE_EDGE_DIGRAPH)

    def test_cap(self):
        """Test the digraph cap, passed in and from settings."""
        with self.assertRaises(CapExceededError):
            build_toppled_digraph(self.h, cap=10)
        with override_settings(HYPERTREE_DIGRAPH_CAP=100):
            with self.assertRaises(CapExceededError):
                build_toppled_digraph(catalog.hyperstar(4, 3))

    def test_ordering_length(self):
        """Test an ordering must cover every vertex."""
        with self.assertRaises(HypergraphError):
            build_toppled_digraph(self.h, (0, 1))


class CriticalConfigurationTests(TestCase):
    """Tests for parking functions and critical configurations."""

    def test_parking_functions(self):
        """Test parking functions and their (n+1)^(n-1) count."""
        self.assertTrue(is_parking([1, 1]))
        self.assertTrue(is_parking([2, 1, 1]))
        self.assertFalse(is_parking([2, 2]))
        for length in range(1, 6):
            self.assertEqual(sum(1 for _ in parking_functions(length)), (length + 1) ** (length - 1))

    def test_single_edge_critical(self):
        """Test the three critical configurations of one 3-edge."""
        t = good_ordering(catalog.single_edge(3), 0)
        critical = critical_configurations(t)
        self.assertEqual(sorted(c.chips for c in critical), [(2, 1, 1), (3, 0, 1), (3, 1, 0)])
        self.assertTrue(all(is_critical(t, c) for c in critical))
        self.assertFalse(is_critical(t, Configuration((2, 2, 0))))

    def test_critical_components(self):
        """Test each critical configuration sits in a copy of the representative digraph."""
        t = good_ordering(catalog.loose_path(2, 3), 0)
        dg = build_toppled_digraph(t.relabeled)
        critical = critical_configurations(t)
        self.assertEqual(len(critical), 9)
        for cfg in critical:
            witness = critical_scc_check(t, cfg, dg)
            self.assertTrue(witness.holds, cfg.chips)
            self.assertEqual(len(witness.members), 5)

    def test_critical_check_refuses_others(self):
        """Test a non-critical configuration is refused."""
        t = good_ordering(catalog.single_edge(3), 0)
        with self.assertRaises(TopplingError):
            critical_scc_check(t, Configuration((0, 2, 2)))


class SubgraphCensusTests(TestCase):
    """Tests for the per-subgraph configuration census."""

    def setUp(self):
        self.h = catalog.loose_path(2, 3)
        self.t = good_ordering(self.h, 0)

    def test_counts_match_exponents(self):
        """Test the census reproduces a_H for every connected subgraph."""
        counts = {}
        for handle in connected_subgraphs(self.t):
            census = subgraph_config_census(self.t, handle)
            self.assertEqual(census.count, census.expected, handle)
            counts[handle.vertex_set] = census.count
        self.assertEqual(counts[(0,)], 4)
        self.assertEqual(counts[(2,)], 1)
        self.assertEqual(counts[(2, 3, 4)], 3)
        self.assertEqual(counts[(0, 1, 2, 3, 4)], 9)

    def test_census_components(self):
        """Test the selected configurations sit in copies of the edge's cycle."""
        census = subgraph_config_census(self.t, edge_handle(self.h, [1]), verify=True)
        self.assertEqual(census.root, 2)
        self.assertTrue(census.verified)

    def test_census_accounts_for_the_degree(self):
        """Test the counts weighted by subgraph order add up to n (r-1)^(n-1)."""
        report = charpoly_hypertree(self.t)
        total = sum(
            subgraph_config_census(self.t, row.handle).count * row.handle.order for row in report.per_subgraph
        )
        self.assertEqual(total, 80)


class IncidenceKernelTests(TestCase):
    """Tests for the generalized incidence matrix."""

    def test_single_edge(self):
        """Test rank 2 and a one-dimensional kernel."""
        report = incidence_matrix_kernel(catalog.single_edge(3))
        self.assertEqual((report.rank, report.kernel_dimension), (2, 1))
        self.assertTrue(report.row_sums_zero)
        self.assertTrue(report.column_sums_zero)
        self.assertTrue(report.edge_vectors_span_kernel)

    def test_kernel_dimension_is_edge_count(self):
        """Test the edge indicators span the kernel on hypertrees."""
        for h in (catalog.loose_path(2, 3), catalog.three_tree_of_order_eleven(), catalog.hyperstar(3, 4)):
            report = incidence_matrix_kernel(h)
            self.assertEqual(report.kernel_dimension, h.m)
            self.assertTrue(report.edge_vectors_span_kernel)
        self.assertEqual(incidence_matrix_kernel(catalog.loose_path(2, 3)).rank, 4)

    def test_edgeless_and_disconnected(self):
        """Test the degenerate and refused inputs."""
        self.assertEqual(incidence_matrix_kernel(catalog.single_vertex(3)).kernel_dimension, 0)
        forest = catalog.random_forest(random.Random(1), 3, [1, 1])
        with self.assertRaises(HypergraphError):
            incidence_matrix_kernel(forest)


class ToppleSummaryTests(TestCase):
    """Tests for the summary behind the topple subcommand."""

    def test_single_edge(self):
        """Test all structural checks hold on one 3-edge."""
        summary = topple_summary(catalog.single_edge(3))
        self.assertEqual(summary.config_count, 15)
        self.assertEqual(summary.critical_count, 3)
        self.assertTrue(summary.single_edge_cycles_only)
        self.assertTrue(summary.cycle_lengths_divisible)
        self.assertTrue(summary.critical_components_match)

    def test_explicit_ordering(self):
        """Test an explicit ordering skips the critical checks."""
        h = catalog.single_edge(3)
        summary = topple_summary(h, ordering=priority_from_sequence(h, ["1", "2", "3"]))
        self.assertIsNone(summary.critical_count)
        self.assertIsNone(summary.single_edge_cycles_only)
        self.assertTrue(summary.cycle_lengths_divisible)

    @tag("slow")
    def test_two_edge_path(self):
        """Test 210 configurations, 9 critical, cycle lengths all 3."""
        summary = topple_summary(catalog.loose_path(2, 3))
        self.assertEqual(summary.config_count, 210)
        self.assertEqual(summary.critical_count, 9)
        self.assertEqual(set(summary.census.lengths), {3})
        self.assertTrue(summary.single_edge_cycles_only)
        self.assertTrue(summary.critical_components_match)

    @tag("slow")
    def test_two_edge_path_resultant(self):
        """Test D / D' of the toppled digraph is the characteristic polynomial."""
        t = good_ordering(catalog.loose_path(2, 3), 0)
        ratio = resultant_from_digraph(build_toppled_digraph(t.relabeled))
        self.assertEqual(ratio.resultant, expand(charpoly_hypertree(t).factored))

    def test_random_orderings_on_a_path(self):
        """Test cycle lengths stay multiples of r under arbitrary orderings."""
        h = catalog.loose_path(2, 3)
        rng = random.Random(4)
        for _ in range(5):
            labels = list(h.labels)
            rng.shuffle(labels)
            summary = topple_summary(h, ordering=priority_from_sequence(h, labels))
            self.assertTrue(summary.cycle_lengths_divisible, labels)
            self.assertFalse(summary.census.partial)


class HyperstarToppleTests(TestCase):
    """Tests for the 9-vertex hyperstar with four 3-edges."""

    def setUp(self):
        self.h = catalog.hyperstar(4, 3)

    @tag("slow")
    def test_interleaved_ordering_has_long_cycles(self):
        """Test an ordering that is not good gives cycles of length 3k up to 12."""
        ordering = priority_from_sequence(self.h, ["2", "4", "6", "8", "1", "3", "5", "7", "9"])
        summary = topple_summary(self.h, ordering=ordering)
        self.assertEqual(summary.config_count, 43758)
        self.assertFalse(summary.census.partial)
        self.assertTrue({3, 6, 9, 12} <= set(summary.census.lengths))
        self.assertTrue(summary.cycle_lengths_divisible)
        self.assertIsNone(summary.critical_components_match)

    @tag("slow")
    def test_good_ordering_critical_components(self):
        """Test the good ordering gives 81 critical components, each a copy of the star."""
        summary = topple_summary(self.h, root=0)
        self.assertEqual(summary.config_count, 43758)
        self.assertEqual(set(summary.census.lengths), {3})
        self.assertEqual(summary.critical_count, 3 ** 4)
        self.assertTrue(summary.single_edge_cycles_only)
        self.assertTrue(summary.critical_components_match)
