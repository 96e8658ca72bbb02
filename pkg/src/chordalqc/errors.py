"""Exception types shared across the library."""


class EvaluationError(ValueError):
    """A jet, map, or field could not be evaluated at the requested point."""


class BranchCutError(EvaluationError):
    """A principal-branch function was evaluated on its branch cut."""


class DomainError(EvaluationError):
    """The point lies outside the tagged domain of a map."""


class DegenerateSampleError(EvaluationError):
    """A local derivative vanished where a nonzero one was required."""


class HorizonError(RuntimeError):
    """The time parameter is outside the certified validity horizon,
    or no horizon exists at the requested level."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not converge within the node budget."""
