"""Exception hierarchy shared by every layer of the kernel."""

from __future__ import annotations


class KernelError(Exception):
    """Base class; ``where`` locates the failure when the caller knows it."""

    def __init__(self, message: str, where: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.where = where

    def located(self, where: str) -> "KernelError":
        if self.where is None:
            self.where = where
        return self

    def __str__(self) -> str:
        if self.where:
            return f"{self.message} (at {self.where})"
        return self.message


class ParseError(KernelError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(message, where=f"line {line}, column {column}")
        self.line = line
        self.column = column


class FuelExhausted(KernelError):
    pass


class EndpointMismatch(KernelError):
    def __init__(self, expected, found, where: str | None = None) -> None:
        super().__init__(f"endpoint mismatch: expected {expected}, found {found}", where)
        self.expected = expected
        self.found = found


class NonConsecutive(KernelError):
    pass


class RuleNotApplicable(KernelError):
    pass


class BudgetExceeded(KernelError):
    pass


class RuleMismatch(KernelError):
    pass


class UndischargedHypothesis(KernelError):
    pass


class NotAPath(KernelError):
    pass


class LawFailed(KernelError):
    pass


class MalformedTower(KernelError):
    pass
