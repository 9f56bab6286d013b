"""Exception hierarchy shared by all modules."""


class WeilError(Exception):
    """Base class for errors raised by weilad."""


class DimensionError(WeilError, ValueError):
    """Operands disagree on the number of variables."""


class NotZeroDimensional(WeilError, ValueError):
    """An operation needs a zero-dimensional ideal and did not get one."""


class AlgebraMismatch(WeilError, ValueError):
    """Two Weil elements (or jets) live in different algebras."""


class DomainError(WeilError, ArithmeticError):
    """A scalar function was applied outside of its domain.

    Also raised when a transcendental function is applied to an exact
    rational scalar, since the result would not be rational.
    """


class WeilSizeError(WeilError, MemoryError):
    """The non-vanishing monomial table would exceed the configured cap."""


class ParseError(WeilError, ValueError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
            if text:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)
