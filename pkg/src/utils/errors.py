"""
Exception hierarchy for rooted density computations
"""


class RootedDensityError(Exception):
    """Base class for every error raised by the package"""


class InputError(RootedDensityError, ValueError):
    """Malformed or out-of-range user input"""

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateModelError(InputError):
    """Well-formed input on which the model or estimator degenerates"""


class SeparationError(DegenerateModelError):
    """Logistic likelihood has no finite maximizer"""


class CollinearityError(DegenerateModelError):
    """Singular Fisher information"""


class InvariantViolation(RootedDensityError, RuntimeError):
    """An internal invariant did not hold; results cannot be trusted"""
