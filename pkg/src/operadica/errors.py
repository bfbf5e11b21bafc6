class InputError(ValueError):
    """Malformed or inconsistent input data."""


class BoundError(ArithmeticError):
    """A computation would leave the declared truncation bounds."""


class PreconditionError(ValueError):
    pass
