from __future__ import annotations

__all__ = [
    "Rank1DetError",
    "ParseError",
    "ScalarKindError",
    "FactorDivisionError",
    "DimensionLimitError",
    "StepSizeError",
    "AgreementError",
    "UsageError",
]


class Rank1DetError(Exception):
    """
    Base class for every error raised by rank1det.
    """


class ParseError(Rank1DetError, ValueError):
    def __init__(self, message: str, *, line: int, column: int = 1):
        self.line = int(line)
        self.column = int(column)
        self.reason = message
        super().__init__(f"[PARSE] line {self.line}, column {self.column}: {message}")


class ScalarKindError(Rank1DetError, TypeError):
    pass


class FactorDivisionError(Rank1DetError, ZeroDivisionError):
    """
    Misprinted formula divides by x_k; raised when x_k == 0 (index is 1-based).
    """
    def __init__(self, index: int):
        self.index = int(index)
        super().__init__(f"[FORMULA] division by zero: x_{self.index} = 0")


class DimensionLimitError(Rank1DetError, ValueError):
    def __init__(self, what: str, n: int, limit: int):
        self.n = int(n)
        self.limit = int(limit)
        super().__init__(f"[LIMIT] {what}: n={self.n} exceeds cap {self.limit}")


class StepSizeError(Rank1DetError, ValueError):
    def __init__(self, h: float):
        self.h = h
        super().__init__(f"[FD] step must be > 0, got h={h!r}")


class AgreementError(Rank1DetError, ArithmeticError):
    def __init__(self, message: str, details: dict | None = None):
        self.details = dict(details or {})
        super().__init__(f"[AGREE] {message}")


class UsageError(Rank1DetError, ValueError):
    """
    Bad command-line parameters or unreadable input files.
    """
