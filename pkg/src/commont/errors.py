"""Exceptions and source diagnostics shared by every module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """A single finding about a source file.

    ``code`` is a stable identifier (``"E102"`` ...) that callers may match on;
    the message wording is free to change.
    """

    severity: str
    span: SourceSpan | None
    message: str
    code: str

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span is not None else ""
        return f"{where}{self.severity} [{self.code}] {self.message}"


class CommontError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, diagnostics: Iterable[Diagnostic] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        return base + "\n" + "\n".join(f"  {d}" for d in self.diagnostics)


class ParseError(CommontError):
    pass


class OntologyError(CommontError):
    pass


class UnknownClassError(OntologyError, KeyError):
    def __str__(self) -> str:
        return CommontError.__str__(self)


class SemanticsError(CommontError):
    pass


class AmbiguousSemanticsError(SemanticsError):
    pass


class FinalStateError(SemanticsError):
    """A run ended in a final state while a commitment was still active."""


class ProtocolError(CommontError):
    pass


class CyclicProtocolError(ProtocolError):
    pass


class InvalidActError(ProtocolError):
    """An act was attempted that the current state does not allow."""

    def __init__(self, message: str, state: str, allowed: Iterable[str]):
        super().__init__(message)
        self.state = state
        self.allowed = tuple(allowed)
