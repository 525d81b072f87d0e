"""Exception hierarchy shared by all modules."""


class CtrlScoreError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(CtrlScoreError, ValueError):
    pass


class InvalidInputError(CtrlScoreError, ValueError):
    pass


class DomainError(CtrlScoreError, ValueError):
    pass


class StabilityError(DomainError):
    pass


class StructureError(DomainError):
    pass


class SizeError(CtrlScoreError, ValueError):
    pass


class DegenerateError(CtrlScoreError, ValueError):
    pass


class InsufficientDataError(CtrlScoreError, ValueError):
    pass


class SchemaError(CtrlScoreError, ValueError):
    pass


class StallError(CtrlScoreError, RuntimeError):
    """Backtracking failed to find an acceptable step."""


class ConvergenceError(CtrlScoreError, RuntimeError):
    pass


class ParseError(CtrlScoreError, ValueError):
    """Malformed input file; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
