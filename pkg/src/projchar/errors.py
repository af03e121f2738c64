"""Exception hierarchy shared by all modules."""


class ProjCharError(Exception):
    """Base class for errors raised by projchar."""


class InputError(ProjCharError, ValueError):
    """Malformed or out-of-contract input."""


class CapabilityError(ProjCharError):
    """The request exceeds a documented size cap."""


class NumericalError(ProjCharError, ArithmeticError):
    """A numerical procedure failed to converge or to validate."""


class ConsistencyError(NumericalError):
    """Independent criteria that must agree came out different."""


class NotTitsPolynomialError(InputError):
    """A polynomial is not the characteristic polynomial of a Tits representation."""
