"""Exception hierarchy.

Validation problems (bad input, dimension mismatch, malformed spec) map to CLI
exit code 1; numerical failures map to exit code 2.
"""


class SpectralShadowError(Exception):
    pass


class ValidationError(SpectralShadowError, ValueError):
    """Bad input. ``path`` is a JSON path when the error comes from a spec file."""

    def __init__(self, message, path=None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class DimensionError(ValidationError):
    pass


class NumericalError(SpectralShadowError, ArithmeticError):
    """A numerical routine failed; ``residual`` is the best residual achieved, if known."""

    def __init__(self, message, residual=None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (achieved residual {residual:.3e})"
        super().__init__(message)


class StageError(SpectralShadowError):
    """Failure inside one rung of a ladder run."""

    def __init__(self, n, stage, cause):
        self.n = n
        self.stage = stage
        self.cause = cause
        super().__init__(f"rung n={n}, stage '{stage}': {cause}")
