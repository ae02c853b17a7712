"""Exception types shared across the package."""


class SketchlabError(Exception):
    """Base class for all sketchlab errors."""


class InputError(SketchlabError, ValueError):
    """Invalid argument: bad dimension, out-of-range index, unsupported value."""


class DimensionError(InputError):
    """Operand shapes are inconsistent."""


class ParseError(InputError):
    """Malformed input file. Carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericError(SketchlabError):
    """A numerical procedure failed (non-convergence, breakdown)."""


class ConvergenceError(SketchlabError):
    """An iterative method hit its iteration limit. Carries the best iterate."""

    def __init__(self, message, best=None, iterations=0, residual=None):
        super().__init__(message)
        self.best = best
        self.iterations = iterations
        self.residual = residual


class ResourceError(SketchlabError):
    """Allocation or capacity failure."""
