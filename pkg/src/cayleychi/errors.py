"""Exception hierarchy shared by every module."""


class CayleyChiError(Exception):
    """Base class for all package errors."""


class NonUnit(CayleyChiError, ArithmeticError):
    """Raised when inverting a zero divisor."""


class NotAField(CayleyChiError, ValueError):
    pass


class CapExceeded(CayleyChiError):
    """A size cap (enumeration, dense, exact-solver) would be exceeded."""

    def __init__(self, what, size, cap):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class NotInSet(CayleyChiError, ValueError):
    pass


class AsymmetricSet(CayleyChiError, ValueError):
    pass


class IdentityInSet(CayleyChiError, ValueError):
    pass


class UnknownVertex(CayleyChiError, KeyError):
    pass


class ImproperBase(CayleyChiError, ValueError):
    pass


class ImproperColoring(CayleyChiError, ValueError):
    pass


class IncompleteColoring(CayleyChiError, ValueError):
    pass


class EmptyGraph(CayleyChiError, ValueError):
    pass


class Disconnected(CayleyChiError, ValueError):
    pass


class NoConvergence(CayleyChiError, RuntimeError):
    pass


class PreconditionFailed(CayleyChiError, ValueError):
    pass


class BadModulus(CayleyChiError, ValueError):
    pass
