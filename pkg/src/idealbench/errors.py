"""Shared exception types."""

from __future__ import annotations


class IdealbenchError(Exception):
    """Base class for all package errors."""


class CoherenceError(IdealbenchError):
    """A finite-string assignment conflicts with a comparable one.

    Carries the conflicting pair of strings and their values.
    """

    def __init__(self, first, second, value_first, value_second):
        self.first = tuple(first)
        self.second = tuple(second)
        self.value_first = value_first
        self.value_second = value_second
        super().__init__(
            f"coherence violation: {self.first}->{value_first} vs "
            f"{self.second}->{value_second}"
        )


class StructuralError(IdealbenchError):
    """Malformed input data (non-contiguous intervals, bad schema shapes)."""


class SchemaError(IdealbenchError):
    """A scenario or certificate file violates the serialization schema."""


class HorizonExhausted(IdealbenchError):
    """A bounded search ran out of room; enlarging the scenario may help."""


class ScenarioContradiction(IdealbenchError):
    """A scenario's stipulations are jointly impossible.

    The attached report explains which stipulations collided; for
    constant-form scenarios this is the expected outcome.
    """

    def __init__(self, report: dict):
        self.report = report
        super().__init__(report.get("summary", "scenario contradiction"))


class LabellingBlocked(IdealbenchError):
    """Label computation hit an oracle query with an Unknown answer."""

    def __init__(self, node, candidate):
        self.node = tuple(node)
        self.candidate = candidate
        super().__init__(
            f"labelling blocked at node {self.node}: "
            f"positivity of candidate {candidate!r} is unknown"
        )
