"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Structural problem with an algebra, term or signature."""


class ParseError(AlgebraError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(Exception):
    """A size or work cap stopped a computation before it could decide."""

    def __init__(self, message, **details):
        self.details = details
        super().__init__(message)


class BudgetExceeded(Exception):
    """A relation enumeration budget was exhausted."""
