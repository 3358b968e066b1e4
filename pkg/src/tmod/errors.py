"""Exception types raised by the tmod package."""


class TmodError(Exception):
    """Base class for all package errors."""


class NonCoprimeError(TmodError, ValueError):
    """A residue symbol was requested for arguments sharing a factor."""


class NotQuadraticResidue(TmodError, ValueError):
    pass


class NoRepresentation(TmodError, ValueError):
    """The integer has no representation by the requested form."""


class PrecisionError(TmodError, ArithmeticError):
    """A p-adic quantity could not be certified at the working precision."""


class WrongPathError(TmodError, ValueError):
    """The fast matrix route was requested outside its domain."""


class UnsupportedFieldError(TmodError, NotImplementedError):
    pass


class StabilizationError(TmodError, RuntimeError):
    """The ray class tower did not stabilize below the level cap."""


class CapacityError(TmodError, MemoryError):
    pass


class ConsistencyError(TmodError, AssertionError):
    """An internal cross-check between two computations failed."""
