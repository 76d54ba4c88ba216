"""Exception hierarchy.

Every error raised on bad input derives from :class:`MatBetaError`, which is a
``ValueError`` so callers that only care about "bad arguments" can catch that.
"""


class MatBetaError(ValueError):
    pass


class InvalidInput(MatBetaError):
    pass


class ShapeError(MatBetaError):
    pass


class NotPSD(MatBetaError):
    pass


class NotPD(MatBetaError):
    pass


class SingularMatrix(MatBetaError):
    pass


class DomainError(MatBetaError):
    """Multivariate gamma argument outside ``a > (i-1)*beta/2``."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TruncationCapExceeded(MatBetaError):
    pass


class BadLowerParameter(MatBetaError):
    pass


class OutsideSupport(MatBetaError):
    pass


class AllDiverged(MatBetaError):
    """No probability expression produced a usable value."""

    def __init__(self, message, outcomes=None):
        super().__init__(message)
        self.outcomes = outcomes or {}


class NotEstimable(MatBetaError):
    pass


class DegenerateDesign(MatBetaError):
    pass
