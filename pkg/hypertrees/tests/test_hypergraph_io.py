"""
Tests for reading and writing hypergraph files.
"""
import tempfile
from pathlib import Path

from django.conf import settings
from django.test import TestCase

from hypertrees.services import catalog
from hypertrees.services.exceptions import HypergraphParseError
from hypertrees.services.hypergraph_io import dump_text, load_hypergraph, loads, parse_json, parse_text, to_json
from hypertrees.services.runner import EXIT_PARSE, RunConfig, run

SAMPLES = settings.BASE_DIR / "samples"


class TextFormatTests(TestCase):
    """Tests for the 'r n m' text format."""

    def test_load_sample(self):
        """Test the 11-vertex sample loads with numeric label order."""
        raw = load_hypergraph(SAMPLES / "three_tree_11.txt")
        self.assertEqual((raw.r, raw.n), (3, 11))
        self.assertEqual(raw.labels, tuple(str(v) for v in range(1, 12)))
        self.assertEqual(raw.build(), catalog.three_tree_of_order_eleven())

    def test_labels_in_order_of_use(self):
        """Test non-numeric labels keep the order in which they first appear."""
        raw = parse_text("3 5 2\nroot b a\na x y\n")
        self.assertEqual(raw.labels, ("root", "b", "a", "x", "y"))
        self.assertEqual(raw.edges, ((0, 1, 2), (2, 3, 4)))

    def test_header_errors(self):
        """Test header problems report the line and column."""
        with self.assertRaises(HypergraphParseError) as ctx:
            parse_text("3 x 2\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 3))

        with self.assertRaises(HypergraphParseError) as ctx:
            parse_text("# comment\n3 5\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("3 integers", ctx.exception.message)

        with self.assertRaises(HypergraphParseError):
            parse_text("\n\n")

    def test_edge_count_mismatch(self):
        """Test a missing edge line is reported."""
        with self.assertRaises(HypergraphParseError) as ctx:
            parse_text("3 5 2\n1 2 3\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("announces 2 edges", ctx.exception.message)

    def test_too_many_labels(self):
        """Test more distinct labels than announced vertices."""
        with self.assertRaises(HypergraphParseError) as ctx:
            parse_text("3 4 2\n1 2 3\n3 4 5\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (3, 5))

    def test_isolated_vertices_padded(self):
        """Test unnamed vertices are added and logged."""
        with self.assertLogs("hypertrees.services.hypergraph_io", level="INFO") as logs:
            raw = parse_text("3 5 1\n1 2 3\n")
        self.assertEqual(raw.labels, ("1", "2", "3", "_isolated0", "_isolated1"))
        self.assertIn("padded 2", logs.output[0])

    def test_non_uniform_sample_parses(self):
        """Test a non-uniform edge parses but fails uniformity."""
        raw = load_hypergraph(SAMPLES / "non_uniform.txt")
        findings = raw.findings()
        self.assertFalse(findings[0].passed)
        self.assertIn("edge 1 has 2 vertices", findings[0].detail)

    def test_dump_text(self):
        """Test the written text parses back to the same hypergraph."""
        h = catalog.three_tree_of_order_eleven()
        text = dump_text(h)
        self.assertTrue(text.startswith("3 11 5\n1 4 7\n"))
        self.assertEqual(loads(text).build(), h)

    def test_missing_file(self):
        """Test an unreadable path is a parse error at line 0."""
        with self.assertRaises(HypergraphParseError) as ctx:
            load_hypergraph(SAMPLES / "missing.txt")
        self.assertEqual(ctx.exception.line, 0)

    def test_undecodable_file(self):
        """Test bytes that are not UTF-8 are a parse error at line 1 and exit 3."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "binary.txt"
            path.write_bytes(b"\xff\xfe r=3")
            with self.assertRaises(HypergraphParseError) as ctx:
                load_hypergraph(path)
            self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 1))

            result = run(RunConfig("charpoly", input_path=str(path)))
        self.assertEqual(result.exit_code, EXIT_PARSE)
        self.assertEqual(result.report["line"], 1)


class JsonFormatTests(TestCase):
    """Tests for the JSON format."""

    def test_load_sample(self):
        """Test the JSON sample is the two-edge loose path."""
        raw = load_hypergraph(SAMPLES / "loose_path_2_3.json")
        self.assertEqual(raw.build(), catalog.loose_path(2, 3))

    def test_vertices_optional(self):
        """Test labels are collected from the edges without a vertex list."""
        raw = loads('{"r": 3, "edges": [["c", "a", "b"]]}')
        self.assertEqual(raw.labels, ("c", "a", "b"))

    def test_errors(self):
        """Test malformed JSON input."""
        with self.assertRaises(HypergraphParseError) as ctx:
            loads('{"r": 3,')
        self.assertEqual(ctx.exception.line, 1)
        with self.assertRaises(HypergraphParseError):
            parse_json({"edges": []})
        with self.assertRaises(HypergraphParseError):
            parse_json({"r": 3, "vertices": ["1", "2", "3"], "edges": [["1", "2", "4"]]})
        with self.assertRaises(HypergraphParseError):
            parse_json({"r": 3, "vertices": ["1", "1"], "edges": []})
        with self.assertRaises(HypergraphParseError):
            parse_json([["1", "2", "3"]])

    def test_to_json(self):
        """Test the JSON form uses labels."""
        data = to_json(catalog.single_edge(3))
        self.assertEqual(data, {"r": 3, "vertices": ["1", "2", "3"], "edges": [["1", "2", "3"]]})
        self.assertEqual(parse_json(data).build(), catalog.single_edge(3))
