"""Exception hierarchy shared across the package."""


class NCBeurlingError(Exception):
    """Base class for all package errors."""


class StructuralError(NCBeurlingError, ValueError):
    """An element or specification does not conform to the block structure."""


class DomainError(NCBeurlingError, ValueError):
    """An argument lies outside the domain of an operation (e.g. p < 1)."""


class PreconditionError(NCBeurlingError, ValueError):
    """A mathematical precondition failed. ``witness`` carries the evidence."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTracialError(PreconditionError):
    """The expectation onto the diagonal is not multiplicative on the algebra."""


class InvariantError(NCBeurlingError, ArithmeticError):
    """A computed object violates one of its invariants beyond tolerance."""

    def __init__(self, message, residual=None, witness=None):
        super().__init__(message)
        self.residual = residual
        self.witness = witness
