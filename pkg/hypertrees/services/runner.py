"""
Run one subcommand end to end: load, validate, compute, serialize.

Shared by the ``hypertree`` management command and the run endpoint, so
both produce byte-identical reports for the same input and options.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from rest_framework.renderers import JSONRenderer

from ..serializers import (
    CharPolyReportSerializer,
    DivisibilityVerdictSerializer,
    FindingSerializer,
    LoosePathComparisonSerializer,
    MatchingProfileSerializer,
    SuiteReportSerializer,
    ToppleSummarySerializer,
)
from .catalog import loose_path
from .exceptions import CapExceededError, HypergraphError, HypergraphParseError, HypertreeError
from .hypergraph import Finding, Hypergraph, delete_vertices, good_ordering
from .hypergraph_io import RawHypergraph, load_hypergraph, parse_json
from .matching import matching_counts
from .spectra import charpoly_hypertree, check_divisibility, loose_path_crosscheck, nullity
from .toppling import priority_from_sequence, topple_summary
from .verification import run_suite

logger = logging.getLogger(__name__)

NEEDS_INPUT = ("check", "charpoly", "matching", "nullity", "divides", "topple")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CAP = 2
EXIT_PARSE = 3

Ordering = Union[str, Tuple[str, ...]]


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input_path: Optional[str] = None
    hypergraph: Optional[dict] = None
    root: Optional[str] = None
    ordering: Ordering = "good"
    keep: Tuple[str, ...] = ()
    m: Optional[int] = None
    r: Optional[int] = None
    suite: str = "small"
    seed: int = 0
    subgraph_cap: Optional[int] = None
    digraph_cap: Optional[int] = None
    cycle_cap: Optional[int] = None
    length_cap: Optional[int] = None
    expand_guard: Optional[int] = None
    workers: Optional[int] = None
    output_format: str = "json"
    breakdown: bool = False
    expand: bool = False


@dataclass
class RunResult:
    exit_code: int
    report: Dict[str, object] = field(default_factory=dict)
    output: str = ""


class ValidationFailed(HypertreeError):
    def __init__(self, findings: List[Finding]):
        self.findings = findings
        super().__init__("; ".join(f"{f.code}: {f.detail}" for f in findings if not f.passed))


def _load(config: RunConfig) -> RawHypergraph:
    if config.hypergraph is not None:
        return parse_json(config.hypergraph)
    if not config.input_path:
        raise HypergraphParseError("no input file given", 0, 0)
    return load_hypergraph(config.input_path)


def _require(raw: RawHypergraph, codes: Sequence[str]) -> Hypergraph:
    findings = raw.findings()
    if not set(codes) <= {f.code for f in findings if f.passed}:
        raise ValidationFailed(findings)
    return raw.build()


HYPERTREE = ("uniformity", "distinct_edges", "linearity", "connectivity", "acyclicity", "hypertree")
UNIFORM = ("uniformity", "distinct_edges")


def _root(h: Hypergraph, config: RunConfig) -> int:
    return 0 if config.root is None else h.vertex_of(config.root)


def _check(config: RunConfig, raw: RawHypergraph, context: dict) -> Tuple[int, dict]:
    findings = raw.findings()
    valid = all(f.passed for f in findings)
    data = {"valid": valid, "findings": FindingSerializer(findings, many=True).data}
    return (EXIT_OK if valid else EXIT_VALIDATION), data


def _charpoly(config: RunConfig, raw: RawHypergraph, context: dict) -> Tuple[int, dict]:
    h = _require(raw, HYPERTREE)
    t = good_ordering(h, _root(h, config))
    report = charpoly_hypertree(t, config.subgraph_cap, config.workers)
    context.update(hypergraph=h, breakdown=config.breakdown, expand=config.expand, expand_guard=config.expand_guard)
    return EXIT_OK, CharPolyReportSerializer(report, context=context).data


def _matching(config: RunConfig, raw: RawHypergraph, context: dict) -> Tuple[int, dict]:
    h = _require(raw, UNIFORM)
    context.update(r=h.r)
    return EXIT_OK, MatchingProfileSerializer(matching_counts(h), context=context).data


def _nullity(config: RunConfig, raw: RawHypergraph, context: dict) -> Tuple[int, dict]:
    h = _require(raw, HYPERTREE)
    t = good_ordering(h, _root(h, config))
    report = charpoly_hypertree(t, config.subgraph_cap, config.workers)
    return EXIT_OK, {
        "nullity": str(nullity(report, t)),
        "valuation": str(report.factored.valuation),
        "lambda_exponent": str(report.factored.lambda_exponent),
    }


def _divides(config: RunConfig, raw: RawHypergraph, context: dict) -> Tuple[int, dict]:
    h = _require(raw, HYPERTREE)
    keep = sorted({h.vertex_of(label) for label in config.keep})
    t = good_ordering(h, _root(h, config))
    verdict = check_divisibility(t, keep, config.subgraph_cap)
    data = dict(DivisibilityVerdictSerializer(verdict, context={"hypergraph": h}).data)
    data["kept"] = [h.labels[v] for v in keep]
    data["isolated"] = delete_vertices(h, set(range(h.n)) - set(keep)).isolated
    return EXIT_OK, data


def _topple(config: RunConfig, raw: RawHypergraph, context: dict) -> Tuple[int, dict]:
    caps = dict(cap=config.digraph_cap, cycle_cap=config.cycle_cap, length_cap=config.length_cap)
    if config.ordering == "good":
        h = _require(raw, HYPERTREE)
        summary = topple_summary(h, _root(h, config), **caps)
    else:
        h = _require(raw, UNIFORM)
        priority = priority_from_sequence(h, config.ordering)
        summary = topple_summary(h, ordering=priority, **caps)
    return EXIT_OK, ToppleSummarySerializer(summary).data


def _loosepath(config: RunConfig, raw: Optional[RawHypergraph], context: dict) -> Tuple[int, dict]:
    if config.m is None or config.r is None:
        raise HypergraphError("loosepath needs both m and r")
    comparison = loose_path_crosscheck(config.m, config.r, config.subgraph_cap)
    context.update(hypergraph=loose_path(config.m, config.r))
    code = EXIT_OK if comparison.agree else EXIT_VALIDATION
    return code, LoosePathComparisonSerializer(comparison, context=context).data


def _verify(config: RunConfig, raw: Optional[RawHypergraph], context: dict) -> Tuple[int, dict]:
    report = run_suite(config.suite, config.seed)
    return (EXIT_OK if report.passed else EXIT_VALIDATION), SuiteReportSerializer(report).data


HANDLERS: Dict[str, Callable[[RunConfig, Optional[RawHypergraph], dict], Tuple[int, dict]]] = {
    "check": _check,
    "charpoly": _charpoly,
    "matching": _matching,
    "nullity": _nullity,
    "divides": _divides,
    "topple": _topple,
    "loosepath": _loosepath,
    "verify": _verify,
}


def render(subcommand: str, data: dict, output_format: str) -> str:
    if output_format == "json":
        return JSONRenderer().render(data, renderer_context={"indent": 2}).decode() + "\n"
    if subcommand == "charpoly" and "text" in data:
        lines = [data["text"]]
        for row in data.get("breakdown", []):
            lines.append("\t".join(["{" + ",".join(row["vertices"]) + "}", row["a_H"], row["phi_text"]]))
        return "\n".join(lines) + "\n"
    return "\n".join(_text_lines(data)) + "\n"


def _text_lines(data, prefix: str = "") -> List[str]:
    lines = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and value and "terms" not in value and "factors" not in value:
            lines.extend(_text_lines(value, name + "."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                lines.extend(_text_lines(item, f"{name}[{i}]."))
        else:
            lines.append(f"{name}: {value}")
    return lines


def run(config: RunConfig) -> RunResult:
    """
    Execute ``config`` and return the exit code, report and rendered output.

    Exit codes: 0 success, 1 validation failure, 2 cap exceeded,
    3 input that does not parse.
    """
    if config.subcommand not in HANDLERS:
        raise ValueError(f"unknown subcommand {config.subcommand!r}")
    context: dict = {}
    try:
        raw = _load(config) if config.subcommand in NEEDS_INPUT else None
        exit_code, data = HANDLERS[config.subcommand](config, raw, context)
    except HypergraphParseError as exc:
        exit_code, data = EXIT_PARSE, {"error": exc.message, "line": exc.line, "column": exc.column}
    except CapExceededError as exc:
        exit_code, data = EXIT_CAP, {"error": str(exc)}
    except ValidationFailed as exc:
        exit_code = EXIT_VALIDATION
        data = {"error": str(exc), "findings": FindingSerializer(exc.findings, many=True).data}
    except HypertreeError as exc:
        exit_code, data = EXIT_VALIDATION, {"error": str(exc)}
    if exit_code:
        logger.info("%s finished with exit code %d", config.subcommand, exit_code)
    return RunResult(exit_code, data, render(config.subcommand, data, config.output_format))
