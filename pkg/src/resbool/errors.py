"""Exception hierarchy.

Every error carries a ``category`` used by the CLI as a stable prefix
(``error[parse]: ...``) so scripts can dispatch on it.
"""


class ResboolError(Exception):
    category = "error"


class ParseError(ResboolError, ValueError):
    category = "parse"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class CapacityError(ResboolError):
    category = "capacity"


class ShapeError(ResboolError, ValueError):
    category = "shape"


class InfeasibleError(ResboolError):
    category = "infeasible"


class VerificationError(ResboolError):
    category = "verification"
