"""Shared exception types."""


class BoundExceeded(RuntimeError):
    """A search or enumeration exceeded its configured hard bound."""


class Inconclusive(RuntimeError):
    """A certification routine exhausted its budget without a verdict.

    Raised instead of returning a possibly wrong answer; never silent.
    """


class ParseError(ValueError):
    """A file could not be parsed; carries file name and line number."""

    def __init__(self, filename, lineno, message):
        super().__init__(f"{filename}:{lineno}: {message}")
        self.filename = filename
        self.lineno = lineno
