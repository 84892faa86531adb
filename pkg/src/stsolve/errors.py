"""Exception types shared across the solver."""

from __future__ import annotations


class SolverError(Exception):
    """Base class for all run-level failures raised by this package."""


class ConfigError(SolverError):
    """Invalid or inconsistent run configuration."""


class ResolutionFloorError(SolverError):
    """Refinement would push the finest spacing below the configured floor."""


class NonFiniteFieldError(SolverError):
    """A field contains NaN or Inf; treated as a detected blow-up, never silent state."""


class InstabilityError(SolverError):
    """A stage of a superstep produced non-finite values.

    Carries the 1-based stage index at which the instability was detected.
    """

    def __init__(self, stage: int, message: str | None = None):
        self.stage = stage
        super().__init__(message or f"instability detected at stage {stage}")


class ReactionBlowUpError(SolverError):
    """The exact reaction flow blows up within the requested substep.

    Carries the index of the limiting node.
    """

    def __init__(self, node: int, message: str | None = None):
        self.node = node
        super().__init__(message or f"blow-up during reaction substep at node {node}")


class PinchOffError(SolverError):
    """A radius value reached the pinch-detection threshold."""

    def __init__(self, node: int, message: str | None = None):
        self.node = node
        super().__init__(message or f"pinch-off reached at node {node}")


class NewtonDivergenceError(SolverError):
    """Newton iteration failed to converge within its retry budget."""
