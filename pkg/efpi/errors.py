"""Exception hierarchy. The CLI maps these onto its exit codes."""

from __future__ import annotations


class EfpiError(Exception):
    """Base for every error raised on purpose by this package."""


class ConfigError(EfpiError):
    pass


class TermSyntaxError(EfpiError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class AlphabetError(TermSyntaxError):
    def __init__(self, symbol: str, offset: int):
        super().__init__(f"letter {symbol!r} is outside the alphabet", offset)
        self.symbol = symbol


class InvalidPositionError(EfpiError):
    pass


class UnboundVariableError(EfpiError):
    def __init__(self, variable: str):
        super().__init__(f"variable {variable!r} is not bound by the valuation")
        self.variable = variable


class EmptyReductError(EfpiError):
    pass


class WrongSideError(EfpiError):
    pass


class NonFiniteWordError(EfpiError):
    pass


class BudgetExceededError(EfpiError):
    pass


class PreconditionViolation(EfpiError):
    pass


class NotSpoilerWinning(EfpiError):
    pass
