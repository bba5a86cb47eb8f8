"""Exception types shared across the package."""


class FlowbenchError(Exception):
    """Base class for errors raised by this package."""


class GraphBuildError(FlowbenchError, ValueError):
    """Invalid input to build_network (bad ids, negative or overflowing capacity)."""


class DimacsFormatError(FlowbenchError, ValueError):
    """Malformed DIMACS max-flow problem file."""


class SolverInvariantError(FlowbenchError, AssertionError):
    """A solver's internal invariant audit failed (solver bug)."""


class VerificationFailure(FlowbenchError):
    """A solution failed an independent correctness check."""


class CutDisagreementError(VerificationFailure):
    """Solvers returned different cut values on the same instance."""
