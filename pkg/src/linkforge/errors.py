"""Exception types shared across the package."""


class LinkforgeError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class NotAGroup(LinkforgeError):
    pass


class InvalidParameter(LinkforgeError):
    pass


class IndexOutOfRange(LinkforgeError):
    pass


class KLDSyntaxError(LinkforgeError):
    def __init__(self, line: int, col: int, expected: str):
        super().__init__(f"line {line}, col {col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


class ValidationError(LinkforgeError):
    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant
        self.detail = detail


class ColoringError(LinkforgeError):
    def __init__(self, detail: str, crossing: int | None = None, arc: int | None = None):
        super().__init__(detail)
        self.crossing = crossing
        self.arc = arc


class UnknownName(LinkforgeError):
    pass


class ResourceBound(LinkforgeError):
    exit_code = 2

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class InvalidMove(LinkforgeError):
    pass


class ColorMismatch(InvalidMove):
    pass


class InvalidInput(LinkforgeError):
    pass


class NotInnermost(LinkforgeError):
    pass


class BadDegree(LinkforgeError):
    pass


class NoProgress(LinkforgeError):
    pass


class UnmatchedPattern(LinkforgeError):
    pass
