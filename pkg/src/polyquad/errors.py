"""Exception types shared across the package."""


class MeshError(ValueError):
    """Invalid or degenerate polyhedral geometry."""


class OFFParseError(ValueError):
    """Malformed OFF input."""


class ConvergenceError(RuntimeError):
    """An iterative construction stopped before meeting its tolerance.

    ``best_residual`` and ``candidates`` describe the last state reached so
    callers can report how close the run came.
    """

    def __init__(self, message, best_residual=float("nan"), candidates=0):
        super().__init__(message)
        self.best_residual = best_residual
        self.candidates = candidates
