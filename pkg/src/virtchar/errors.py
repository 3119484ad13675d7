"""Exception hierarchy shared by every layer of the calculator."""


class VirtcharError(Exception):
    """Base class for all errors raised by this package."""


class ModelMismatch(VirtcharError):
    pass


class CoeffVariantMismatch(VirtcharError):
    pass


class NonUnit(VirtcharError):
    """An inversion was requested for an element that is not a unit."""


# the truncated-ring flavours of NonUnit carry their own names
class NonUnitConstant(NonUnit):
    pass


class NonUnitLeadingCoefficient(NonUnit):
    pass


class NonNilpotentConstant(VirtcharError):
    pass


class WindowTooNarrow(VirtcharError):
    pass


class PoleAtZero(VirtcharError):
    def __init__(self, exponent, message=None):
        self.exponent = exponent
        super().__init__(message or f"nonzero coefficient at eps^{exponent}")


class DegreeOverflow(VirtcharError):
    pass


class PartitionDegreeMismatch(VirtcharError):
    pass


class MovingPartHasFixedWeight(VirtcharError):
    pass


class DenominatorNotClearing(VirtcharError):
    pass


class IdentityViolation(VirtcharError):
    def __init__(self, identity, where, lhs, rhs):
        self.identity = identity
        self.where = where
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{identity} fails at {where}: {lhs} != {rhs}")


class KernelAssertionError(VirtcharError, AssertionError):
    """Two independent computation routes disagreed; indicates a kernel bug."""


class ParseError(VirtcharError):
    def __init__(self, message, position=None):
        self.position = position
        where = f" (at {position})" if position is not None else ""
        super().__init__(message + where)


class ValidationError(VirtcharError):
    pass


class NonIntegralWarning(UserWarning):
    """A chi_y coefficient is not an integer (functional may not be geometric)."""
