from .errors import BoundError, InputError, PreconditionError

__version__ = "0.1.0"
