"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid input parameter (CLI exit code 2)."""


class DomainError(ParameterError):
    """Argument outside a function's mathematical domain."""


class NumericError(ArithmeticError):
    """Numerical routine failed to converge or bracket."""
