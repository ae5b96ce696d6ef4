# flownet/exceptions.py
"""Exception hierarchy for flownet."""

from __future__ import annotations


class FlownetError(Exception):
    """Base exception for all flownet errors."""


class GraphError(FlownetError):
    """Raised when a graph is structurally invalid."""


class DimensionError(FlownetError):
    """Raised when a vector or matrix has the wrong shape."""

    def __init__(self, what: str, expected: object, actual: object) -> None:
        super().__init__(f"{what}: expected shape {expected}, got {actual}")
        self.what = what
        self.expected = expected
        self.actual = actual


class ConstraintError(FlownetError):
    """Raised when a flow interval violates u- <= 0 <= u+ with u- < u+."""

    def __init__(self, edge: int, lower: float, upper: float) -> None:
        super().__init__(
            f"Edge {edge}: interval [{lower}, {upper}] must satisfy lower <= 0 <= upper "
            "and lower < upper"
        )
        self.edge = edge
        self.lower = lower
        self.upper = upper


class PredicateError(FlownetError):
    """Raised when a graph predicate required by an operation does not hold."""

    def __init__(self, predicate: str) -> None:
        super().__init__(f"Graph precondition failed: {predicate}")
        self.predicate = predicate


class SizeLimitError(FlownetError):
    """Raised when an exhaustive procedure is asked to exceed its size limit."""

    def __init__(self, what: str, limit: int, actual: int) -> None:
        super().__init__(f"{what}: {actual} exceeds limit {limit}")
        self.what = what
        self.limit = limit
        self.actual = actual


class MatchingError(FlownetError):
    """Raised when a matched controller state is required but none exists."""


class CertificationError(FlownetError):
    """Raised when a construction needs a certified-minimal cycle cover."""


class ConstructionError(FlownetError):
    """Raised when a counterexample ordering admits no non-consensus gradient."""


class DivergenceError(FlownetError):
    """Raised when an integration leaves the finite, bounded state region."""

    def __init__(self, time: float, norm: float) -> None:
        super().__init__(f"State diverged at t={time!r} (|x|_inf={norm!r})")
        self.time = time
        self.norm = norm


class ScenarioError(FlownetError):
    """Raised when a scenario document fails validation."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
