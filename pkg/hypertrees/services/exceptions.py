"""
Exception hierarchy for the hypertree services.

The runner maps these onto process exit codes and the API views onto
HTTP responses, so every failure raised by a service derives from
HypertreeError.
"""
from typing import Optional


class HypertreeError(Exception):
    """Base class for all service errors."""


class HypergraphError(HypertreeError, ValueError):
    """Structural problem with a hypergraph (uniformity, ranges, duplicates)."""


class NotAHypertreeError(HypergraphError):
    """The hypergraph is not connected and Berge-acyclic."""


class SubgraphError(HypergraphError):
    """A subgraph handle does not describe a subgraph of its host."""


class PolynomialError(HypertreeError, ValueError):
    """Invalid polynomial operation (zero gcd input, inexact division)."""


class CapExceededError(HypertreeError):
    """A configurable size cap was exceeded; never truncated silently."""

    def __init__(self, what: str, limit: int, observed: Optional[int] = None):
        self.what = what
        self.limit = limit
        self.observed = observed
        detail = f"{what} exceeds cap {limit}"
        if observed is not None:
            detail += f" (got {observed})"
        super().__init__(detail)


class DegreeGuardError(CapExceededError):
    """Expanding a factored polynomial would exceed the degree guard."""


class HypergraphParseError(HypertreeError, ValueError):
    """Malformed hypergraph input, with a line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class TopplingError(HypertreeError, ValueError):
    """Illegal toppling or a configuration outside the expected class."""


class OracleError(HypertreeError):
    """The Macaulay oracle could not produce a characteristic polynomial."""
