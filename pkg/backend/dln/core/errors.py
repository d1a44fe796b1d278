"""Exception hierarchy of the reasoner.

Every error a user can trigger derives from ReasonerError, so the command
line front end can map it to an exit code without a stack trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from dln.constants import EXIT_INPUT_ERROR, EXIT_RESOURCE_LIMIT


@dataclass(frozen=True)
class SourceLocation:
    """1-based position inside a source text."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ReasonerError(Exception):
    """Base class for reasoner errors."""

    exit_code: int = EXIT_INPUT_ERROR


class ParseError(ReasonerError, ValueError):
    """Syntax error in a knowledge base or a query."""

    def __init__(
        self,
        location: SourceLocation,
        message: str,
        expected: Sequence[str] = (),
    ) -> None:
        self.location = location
        self.message = message or "syntax error"
        self.expected = list(expected)
        super().__init__(str(self))

    def __str__(self) -> str:
        text = f"{self.location}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text


class KnowledgeBaseError(ReasonerError):
    """A syntactically valid knowledge base that breaks a well-formedness rule."""


class MissingRankError(ReasonerError, ValueError):
    """A defeasible inclusion without rank in explicit-rank mode."""


class PriorityOrderError(ReasonerError):
    """The computed priority relation is not a strict partial order."""


class PreconditionError(ReasonerError):
    """An operation was called outside its documented preconditions."""


class ResourceLimitExceeded(ReasonerError):
    """The tableau exhausted its node budget; the answer is unknown."""

    exit_code = EXIT_RESOURCE_LIMIT

    def __init__(self, budget: int) -> None:
        self.budget = budget
        super().__init__(f"node budget of {budget} exceeded; answer unknown")
