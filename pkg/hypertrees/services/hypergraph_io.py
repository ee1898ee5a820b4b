"""
Reading and writing hypergraph files.

Text format:

    # comment lines start with '#'
    r n m
    <r labels>        (m lines)

JSON format: {"r": 3, "vertices": [...], "edges": [[...], ...]}.
Labels are arbitrary tokens; they are mapped to vertex ids on load
(numeric labels in numeric order, otherwise in order of first use).
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from .exceptions import HypergraphParseError
from .hypergraph import Finding, Hypergraph, validate_edges

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RawHypergraph:
    """Parsed input before the uniformity invariants are enforced."""

    r: int
    labels: Tuple[str, ...]
    edges: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def findings(self) -> List[Finding]:
        return validate_edges(self.r, self.n, self.edges)

    def build(self) -> Hypergraph:
        return Hypergraph(self.r, self.n, self.edges, self.labels)


def _order_labels(labels: Sequence[str]) -> List[str]:
    distinct = list(dict.fromkeys(labels))
    try:
        return sorted(distinct, key=int)
    except ValueError:
        return distinct


def _column(line: str, token: str) -> int:
    return line.find(token) + 1


def parse_text(text: str) -> RawHypergraph:
    rows = [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise HypergraphParseError("empty input, expected a header line 'r n m'", 1, 1)

    number, header = rows[0]
    tokens = header.split()
    if len(tokens) != 3:
        raise HypergraphParseError(f"header needs 3 integers 'r n m', got {len(tokens)} tokens", number, 1)
    values = []
    for token in tokens:
        try:
            values.append(int(token))
        except ValueError:
            raise HypergraphParseError(f"'{token}' is not an integer", number, _column(header, token)) from None
    r, n, m = values
    if r < 2:
        raise HypergraphParseError(f"uniformity must be at least 2, got {r}", number, _column(header, tokens[0]))
    if n < 1:
        raise HypergraphParseError("vertex count must be positive", number, _column(header, tokens[1]))
    if m < 0:
        raise HypergraphParseError("edge count must be nonnegative", number, _column(header, tokens[2]))

    body = rows[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else number)
        raise HypergraphParseError(f"header announces {m} edges, found {len(body)} edge lines", where, 1)

    raw_edges = []
    for number, line in body:
        tokens = line.split()
        raw_edges.append((number, line, tokens))

    seen = set()
    for number, line, tokens in raw_edges:
        for token in tokens:
            seen.add(token)
            if len(seen) > n:
                raise HypergraphParseError(f"more than {n} distinct vertex labels", number, _column(line, token))
    labels = _order_labels([token for _, _, tokens in raw_edges for token in tokens])
    padding = [f"_isolated{i}" for i in range(n - len(labels))]
    labels = labels + padding
    index = {label: v for v, label in enumerate(labels)}
    edges = tuple(tuple(index[token] for token in tokens) for _, _, tokens in raw_edges)
    if padding:
        logger.info("padded %d unnamed isolated vertices", len(padding))
    return RawHypergraph(r, tuple(labels), edges)


def parse_json(data: Mapping) -> RawHypergraph:
    if not isinstance(data, Mapping):
        raise HypergraphParseError("expected a JSON object", 1, 1)
    try:
        r = int(data["r"])
        edges = [[str(v) for v in edge] for edge in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise HypergraphParseError(f"missing or malformed field: {exc}", 1, 1) from None
    if r < 2:
        raise HypergraphParseError(f"uniformity must be at least 2, got {r}", 1, 1)

    if "vertices" in data:
        labels = [str(v) for v in data["vertices"]]
        if len(set(labels)) != len(labels):
            raise HypergraphParseError("vertex labels repeat", 1, 1)
    else:
        labels = _order_labels([v for edge in edges for v in edge])
    if not labels:
        raise HypergraphParseError("a hypergraph needs at least one vertex", 1, 1)
    index: Dict[str, int] = {label: v for v, label in enumerate(labels)}
    try:
        resolved = tuple(tuple(index[v] for v in edge) for edge in edges)
    except KeyError as exc:
        raise HypergraphParseError(f"edge uses undeclared vertex {exc.args[0]!r}", 1, 1) from None
    return RawHypergraph(r, tuple(labels), resolved)


def loads(text: str) -> RawHypergraph:
    """Parse either format; JSON is recognised by a leading '{'."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise HypergraphParseError(exc.msg, exc.lineno, exc.colno) from None
        return parse_json(data)
    return parse_text(text)


def load_hypergraph(path: Union[str, Path]) -> RawHypergraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise HypergraphParseError(f"cannot read {path}: {exc.strerror}", 0, 0) from None
    except UnicodeDecodeError as exc:
        raise HypergraphParseError(f"{path} is not UTF-8 text: {exc.reason}", 1, 1) from None
    return loads(text)


def dump_text(h: Hypergraph) -> str:
    lines = [f"{h.r} {h.n} {h.m}"]
    lines.extend(" ".join(h.labels[v] for v in edge) for edge in h.edges)
    return "\n".join(lines) + "\n"


def to_json(h: Hypergraph) -> dict:
    return {
        "r": h.r,
        "vertices": list(h.labels),
        "edges": [[h.labels[v] for v in edge] for edge in h.edges],
    }
