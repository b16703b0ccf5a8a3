"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class EtaLabError(Exception):
    """Base class for all errors raised by etalab."""


class DomainError(EtaLabError, ValueError):
    """Argument outside the domain where the operation is defined."""


class PoleError(DomainError):
    """Evaluation requested at a pole.

    ``pole`` carries the offending point (an ``int`` for gamma poles).
    """

    def __init__(self, message: str, pole=None):
        super().__init__(message)
        self.pole = pole


class ExcludedPointError(DomainError):
    """Point where 1 - 2^(1-s) vanishes, so zeta cannot be recovered from eta."""


class SingularFactorError(DomainError):
    pass


class BudgetError(EtaLabError):
    """Direct summation requested beyond the configured term budget."""


class PrecisionError(EtaLabError):
    """Working precision is too low for a trustworthy result."""


class ConfigError(EtaLabError, ValueError):
    pass


class NonFiniteError(EtaLabError, ArithmeticError):
    """An intermediate became NaN or infinite."""


class NoZeroFoundError(EtaLabError):
    pass


class ParseError(EtaLabError, ValueError):
    """Malformed user input. ``column`` is 1-based, or None when unknown."""

    def __init__(self, message: str, text: str = "", column: int | None = None):
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}: {text!r}" if text else message + where)
        self.text = text
        self.column = column
