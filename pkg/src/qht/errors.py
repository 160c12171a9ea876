"""Exception hierarchy shared by every module."""


class QHTError(ValueError):
    """Base class for all errors raised by this package."""


class NonHermitianInput(QHTError):
    pass


class NegativeEigenvalue(QHTError):
    pass


class NotPSD(QHTError):
    pass


class TraceNotOne(QHTError):
    pass


class ZeroVector(QHTError):
    pass


class DimensionMismatch(QHTError):
    pass


class DimensionCapExceeded(QHTError):
    pass


class NotNormalized(QHTError):
    pass


class OrthogonalHypotheses(QHTError):
    pass


class NotFaithful(QHTError):
    pass


class SOutOfRange(QHTError):
    pass


class InfiniteExponentRegion(QHTError):
    pass


class SupportTooLarge(QHTError):
    pass


class ConsistencyError(QHTError):
    """Two independent evaluation routes disagreed beyond tolerance."""


class ParseError(QHTError):
    pass
