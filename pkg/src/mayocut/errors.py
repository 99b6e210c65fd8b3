"""Exception types raised by the solvers and file readers."""


class MayoCutError(Exception):
    pass


class InvalidHyperplaneError(MayoCutError, ValueError):
    pass


class DimensionMismatchError(MayoCutError, ValueError):
    pass


class CapExceededError(MayoCutError, ValueError):
    """An enumeration or verification would exceed its configured size cap."""


class RetryLimitError(MayoCutError, RuntimeError):
    """The discrete search ran out of perturbation retries.

    ``diagnostics`` carries the search counters and ``nearest_miss`` the
    candidate that came closest to bisecting everything (or None).
    """

    def __init__(self, message, diagnostics=None, nearest_miss=None):
        super().__init__(message)
        self.diagnostics = diagnostics
        self.nearest_miss = nearest_miss


class SweepFailedError(MayoCutError, RuntimeError):
    """No sampled direction produced a common touching median at some level."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class ParseError(MayoCutError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column
