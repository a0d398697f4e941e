"""Exception hierarchy; the CLI maps each class to an exit code."""


class ChandetError(Exception):
    exit_code = 3


class ParseError(ChandetError, ValueError):
    """Malformed channel/witness source (bad JSON, unknown keys, bad syntax)."""

    exit_code = 1


class ValidationError(ChandetError, ValueError):
    """Well-formed input that violates a physical or dimensional constraint."""

    exit_code = 2


class NumericError(ChandetError, ArithmeticError):
    exit_code = 3
