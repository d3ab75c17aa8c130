"""Exception types shared across the package."""


class GTCodesError(Exception):
    """Base class for all gtcodes errors."""


class NotPrimePower(GTCodesError):
    """Field cardinality is not a supported prime power."""


class DivisionByZero(GTCodesError):
    """Multiplicative inverse of zero requested."""


class InvalidParams(GTCodesError):
    """Parameters violate a documented precondition."""


class InvalidInput(GTCodesError):
    """Inputs to a bound check are internally inconsistent."""


class Infeasible(GTCodesError):
    """No construction exists for the requested parameters."""


class BudgetExceeded(GTCodesError):
    """Exact computation would exceed the enumeration budget."""


class NotConstantWeight(GTCodesError):
    """Operation requires a constant-weight matrix."""


class ParseError(GTCodesError):
    """Malformed matrix or generator file.

    Carries ``line`` (1-based) and ``column`` (1-based, 0 when the whole
    line is at fault) for error reporting.
    """

    def __init__(self, message, line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
