"""Exception hierarchy shared by all modules."""


class WangNormError(Exception):
    """Base class for every error raised by this package."""


class TileSyntaxError(WangNormError):
    def __init__(self, lineno, reason):
        self.lineno = lineno
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}")


class DuplicateId(WangNormError):
    pass


class EmptySet(WangNormError):
    pass


class NonSimplePolygon(WangNormError):
    pass


class ClockwisePolygon(WangNormError):
    pass


class EdgeColorCountMismatch(WangNormError):
    pass


class NonConvexInput(WangNormError):
    pass


class DegenerateAfterZigzag(WangNormError):
    pass


class DimensionMismatch(WangNormError):
    pass


class NotIntegral(WangNormError):
    pass


class ZeroCycle(WangNormError):
    pass


class NotACycle(WangNormError):
    pass


class TooLarge(WangNormError):
    pass


class NoTorus(WangNormError):
    pass


class NotFlatTorus(WangNormError):
    pass


class EmptyPatternSet(WangNormError):
    pass


class BudgetExhausted(WangNormError):
    """A search ran out of its node budget.

    ``partial`` carries whatever the search had produced so far; its type
    depends on the operation that raised.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
