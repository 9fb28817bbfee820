class LhomError(Exception):
    pass


class ParseError(LhomError, ValueError):
    """Malformed input text; ``line`` is 1-based, or None for end-of-input problems."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractError(LhomError, ValueError):
    """A caller broke an operation's precondition (e.g. u == v where distinct vertices are required)."""


class RefusalError(LhomError):
    """A construction refuses to run because its mathematical precondition fails.

    ``detail`` carries the offending object (a triple, a component id, ...).
    """

    def __init__(self, message: str, detail=None):
        self.detail = detail
        super().__init__(message)


class VerificationError(LhomError):
    """An internal self-check failed; this indicates a bug, not bad input."""
