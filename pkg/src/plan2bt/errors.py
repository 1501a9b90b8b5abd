"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class Plan2BTError(Exception):
    """Base class for all errors raised by plan2bt."""


class ParseError(Plan2BTError):
    """Malformed input text (s-expressions, plan lines, tree XML)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{message} ({where})"
        super().__init__(message)


class UnsupportedFeature(Plan2BTError):
    pass


class TypeMismatch(Plan2BTError):
    pass


class UnknownPredicate(Plan2BTError):
    pass


class UnknownObject(Plan2BTError):
    pass


class UnknownAction(Plan2BTError):
    pass


class ArityMismatch(Plan2BTError):
    pass


class DomainMismatch(Plan2BTError):
    pass


class InvalidDuration(Plan2BTError):
    pass


class UnsupportedRequirement(Plan2BTError):
    """A requirement is neither linked to a producer nor satisfied initially."""

    def __init__(self, message: str, unit_id: int, predicate: object):
        super().__init__(message)
        self.unit_id = unit_id
        self.predicate = predicate


class UnknownUnit(Plan2BTError):
    pass


class TreeBuildError(Plan2BTError):
    pass


class UnknownNodeKind(Plan2BTError):
    pass


class DanglingActionId(Plan2BTError):
    pass


class DeadlockDetected(Plan2BTError):
    pass


class BackendError(Plan2BTError):
    pass


class ExecutionFailed(Plan2BTError):
    """A behavior-tree run ended with FAILURE instead of SUCCESS."""


class EmptyTrace(Plan2BTError):
    pass
