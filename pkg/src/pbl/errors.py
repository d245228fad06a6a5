"""Exception hierarchy shared across the package."""


class PblError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(PblError):
    """Shapes or dimensions of the operands do not match."""


class DomainError(PblError):
    """A point lies outside the domain an operation is defined on
    (boundary/exterior points, zero fractional-linear denominators,
    degenerate lattice bases)."""


class PreconditionError(PblError):
    """A numeric parameter violates an operation's stated precondition."""


class NumericalError(PblError):
    """An internal numerical procedure failed to converge or could not
    certify its result (quadrature, optimizer, enumeration radius)."""
