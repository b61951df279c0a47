"""Exception types shared across the engine.

Validation problems inside a graph document are *data* (see
``graph.ValidationReport``); exceptions are reserved for contract
violations and irrecoverable states.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all argscore errors."""


class MalformedDocumentError(EngineError):
    """Graph document cannot be parsed into a graph at all.

    Carries ``issues``: a list of (node_ids, message) pairs describing every
    structural defect found, so callers can fold them into a report.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(msg for _, msg in self.issues) or "malformed document")


class InvalidGraphError(EngineError):
    """A valid graph was required but validation failed; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"graph failed validation with {len(report.errors)} error(s)")


class CycleError(EngineError):
    """Topological operations were invoked on a cyclic graph."""


class RepairUnavailableError(EngineError):
    """The external repair callback raised instead of returning a candidate."""


class EmptyAggregateError(EngineError):
    """Aggregation was requested over an empty contribution list."""


class DegenerateWeightsError(EngineError):
    """All component weights are zero; the final score is undefined."""


class UnknownNodeError(EngineError):
    """A metric update referenced a node id absent from the session graph."""


class MalformedMetricsError(EngineError):
    """A metric vector had missing, non-finite, or out-of-range components."""


class NoValidTrialsError(EngineError):
    """A paper had no valid (dag sample x weight trial) scores to average."""


class DegenerateLabelsError(EngineError):
    """The label set cannot support the requested ranking metric."""


class BudgetZeroError(EngineError):
    """A search stage was started with a zero candidate budget."""


class UnknownDimensionError(EngineError):
    """Ablation was requested over a dimension the engine does not define."""
