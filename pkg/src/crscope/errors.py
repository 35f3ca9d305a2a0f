"""Exception hierarchy shared by all crscope modules."""


class CRScopeError(Exception):
    """Base class for every error raised by crscope."""


class InputError(CRScopeError, ValueError):
    """Malformed or out-of-contract input."""


class NumericalDegeneracyError(CRScopeError, ArithmeticError):
    """A computed quantity violates a structural invariant, usually a tolerance failure."""


class DegeneratePatchError(CRScopeError):
    """A patch whose real locus could not be sampled."""


class InternalConsistencyError(CRScopeError):
    """An internal invariant (e.g. reality of a polynomial) was violated."""
