"""Exception types shared across the package."""


class NZHexError(Exception):
    """Base class for all errors raised by nzhex."""


class DataError(NZHexError, ValueError):
    """Bad input data: unknown units, duplicate rows, invalid numbers."""


class UnknownUnitError(DataError):
    def __init__(self, text, suggestions):
        self.text = text
        self.suggestions = list(suggestions)
        hint = ", ".join(repr(s) for s in self.suggestions)
        super().__init__(f"unknown unit {text!r}; closest matches: {hint}")


class AmbiguousNameError(DataError):
    def __init__(self, text, candidates):
        self.text = text
        self.candidates = list(candidates)
        listed = ", ".join(repr(c) for c in self.candidates)
        super().__init__(f"ambiguous name {text!r}; could be any of: {listed}")


class UsageError(NZHexError):
    """Inconsistent or missing command-line options."""
