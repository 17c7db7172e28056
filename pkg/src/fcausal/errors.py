"""Exception types shared across the package."""


class AnalysisError(ValueError):
    """Invalid input or violated precondition.

    ``code`` is a short stable identifier such as ``"not-in-support"``.
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class ParseError(AnalysisError):
    def __init__(self, message: str, line: int = 0, column: int = 0, code: str = "syntax"):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(code, where + message)


class InvariantError(RuntimeError):
    """An internal consistency check failed (a bug, not bad input)."""
