"""crscope: numerical analysis of CR singularities, Levi pencils and maximum modulus checks."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CRScopeError,
    DegeneratePatchError,
    InputError,
    InternalConsistencyError,
    NumericalDegeneracyError,
)
from .numerics import DEFAULT_TOL, Tolerance  # noqa: E402

__all__ = [
    "__version__",
    "CRScopeError",
    "DegeneratePatchError",
    "InputError",
    "InternalConsistencyError",
    "NumericalDegeneracyError",
    "DEFAULT_TOL",
    "Tolerance",
]
