"""Exception hierarchy shared by every ivfopt module."""

from __future__ import annotations


class IvfOptError(Exception):
    """Base class for all package errors."""


class InvalidInterval(IvfOptError, ValueError):
    pass


class ExtendedArithmetic(IvfOptError, ArithmeticError):
    """Arithmetic was attempted on an interval with an infinite endpoint."""


class DimensionError(IvfOptError, ValueError):
    pass


class EmptyFamily(IvfOptError, ValueError):
    pass


class IvfSyntaxError(IvfOptError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class EndpointOrderViolation(IvfOptError, ValueError):
    def __init__(self, point, lower: float, upper: float, name: str = ""):
        self.point = tuple(float(v) for v in point)
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"{name or 'ivf'}: lower endpoint {lower!r} exceeds upper endpoint {upper!r} at y={self.point}"
        )


class DomainCoverageError(IvfOptError, ValueError):
    pass


class ExpressionDomainError(IvfOptError, ValueError):
    """An expression was evaluated outside its natural domain (ln of a non-positive value, ...)."""


class OutOfDomain(IvfOptError, ValueError):
    def __init__(self, point, name: str = ""):
        self.point = tuple(float(v) for v in point)
        super().__init__(f"point {self.point} lies outside the domain of {name or 'the ivf'}")


class DomainMismatch(IvfOptError, ValueError):
    pass


class UnknownCorpusEntry(IvfOptError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class PreconditionError(IvfOptError, ValueError):
    pass


class TheoremViolation(IvfOptError, AssertionError):
    """A theorem's conclusion failed on the grid although its hypotheses were certified."""
