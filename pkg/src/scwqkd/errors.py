"""Exception types shared across the toolkit."""


class InvalidParameterError(ValueError):
    """A physical or numerical parameter lies outside its allowed domain."""

    code = "invalid-parameter"


class UndefinedQBERError(ArithmeticError):
    """The channel produces no conclusive events (G = 1), so Q is undefined."""

    code = "undefined-qber"
