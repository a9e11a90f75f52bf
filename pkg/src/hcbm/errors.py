"""Exception types shared across the package."""


class HcbmError(Exception):
    """Base class for all errors raised by this package."""


class InvalidHierarchy(HcbmError):
    """The hierarchy specification violates a structural invariant."""


class NotPositiveSemiDefinite(HcbmError):
    """A correlation matrix has a meaningfully negative eigenvalue."""


class InvalidPermutation(HcbmError):
    """The permutation is not a bijection on [0, N)."""


class ZeroVariance(HcbmError):
    """A column is constant, so no correlation is defined for it."""

    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"column {column} has zero variance")


class DimensionMismatch(HcbmError):
    """Two operands do not share the required shape."""


class DegenerateParameters(HcbmError):
    """A distribution parameter is outside its admissible range."""


class InvalidK(HcbmError):
    """Requested cluster count is outside [1, N]."""
