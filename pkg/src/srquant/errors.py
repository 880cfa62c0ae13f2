"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid or infeasible parameter combination."""


class DimensionError(ValueError):
    """Input length does not match the operator geometry."""


class InputRangeError(ValueError):
    """Input exceeds the amplitude range the quantizer was configured for."""


class ClusterAmbiguityError(RuntimeError):
    """A recovered spike falls inside the neighborhood of two true spikes."""


class NumericalAnomalyError(RuntimeError):
    """An internal quantity left its guaranteed range."""


class ConvergenceError(RuntimeError):
    """Iterative solver failed to reach its stopping criterion."""

    def __init__(self, message, iterations=None, primal_residual=None,
                 dual_residual=None, feasibility_residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.primal_residual = primal_residual
        self.dual_residual = dual_residual
        self.feasibility_residual = feasibility_residual
