"""Exception hierarchy.

Everything raised deliberately by the library derives from :class:`CorescopeError`,
which the CLI maps to the data-error exit status.
"""

from __future__ import annotations


class CorescopeError(Exception):
    """Base class for all library errors."""


class ParseError(CorescopeError, ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class GraphError(CorescopeError, ValueError):
    """Malformed graph construction or invalid node reference."""


class PermutationError(GraphError):
    pass


class LimitError(CorescopeError, ValueError):
    """A size bound for an exhaustive routine was exceeded."""

    def __init__(self, what: str, value: int, limit: int):
        self.limit = limit
        super().__init__(f"{what}: n={value} exceeds the limit of {limit}")


class TaskError(CorescopeError):
    pass


class ScopeActionError(TaskError):
    pass


class ScopeTargetError(TaskError):
    pass


class ArityError(TaskError):
    pass


class ChainError(TaskError):
    pass
