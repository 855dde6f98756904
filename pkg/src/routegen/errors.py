"""Exception hierarchy shared by all routegen modules.

Two branches matter to callers: ``DataError`` covers anything wrong with
user-supplied input (files, positions, shapes, parameters) and maps to CLI
exit code 2; ``NumericError`` covers non-finite math during training and
maps to exit code 3.
"""


class RouteGenError(Exception):
    """Base class for all routegen errors."""


class DataError(RouteGenError):
    """Invalid input data or parameters."""


class NumericError(RouteGenError):
    """Numerical failure (NaN/inf) in training or evaluation."""


class MalformedPosition(DataError):
    """Position label outside the A1..K18 grammar."""


class EmptyRoute(DataError):
    """A problem must occupy at least one hold."""


class ParseError(DataError):
    """Malformed corpus record. Carries the 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateName(DataError):
    """Two corpus problems share a name."""


class EmptyCorpus(DataError):
    """Operation requires a non-empty corpus."""


class DegenerateSplit(DataError):
    """Requested split would leave the training set empty."""


class ShapeMismatch(DataError):
    """Vector or matrix dimensions do not line up."""


class InvalidK(DataError):
    """Hold-selection count outside [1, 198]."""


class InvalidEpsilon(DataError):
    """Finite-difference step size outside the supported range."""


class NonFiniteGradient(NumericError):
    """A gradient contained NaN or inf."""


class NonFiniteLoss(NumericError):
    """Loss became NaN or inf. Carries epoch/batch context when raised
    from the training loop."""

    def __init__(self, message: str, epoch: int | None = None, batch: int | None = None):
        super().__init__(message)
        self.epoch = epoch
        self.batch = batch
