"""Exception hierarchy shared by all modules."""


class SpdPlusError(ValueError):
    """Base class for every error raised by spdplus."""


class NotSquare(SpdPlusError):
    pass


class AsymmetryExceedsTolerance(SpdPlusError):
    pass


class DimensionMismatch(SpdPlusError):
    pass


class SplitOutOfRange(SpdPlusError):
    pass


class NotPositiveDefinite(SpdPlusError):
    """Raised when a matrix required to be positive definite is not.

    ``pivot`` is the zero-based index of the failing Cholesky pivot when the
    failure was detected during factorization, else ``None``.
    """

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class NotPSD(SpdPlusError):
    pass


class FirstArgumentLarger(SpdPlusError):
    pass


class InnerDimensionLarger(SpdPlusError):
    pass


class ConvergenceFailure(SpdPlusError, ArithmeticError):
    pass


class SingularTransform(SpdPlusError):
    pass


class SamplingFailure(SpdPlusError, RuntimeError):
    pass
