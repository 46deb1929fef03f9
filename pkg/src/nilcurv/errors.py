"""Exception types shared across the package."""


class NilcurvError(Exception):
    """Base class for every error raised by this package."""


class DegenerateInputError(NilcurvError, ValueError):
    """A partition/composition for which the requested constant is undefined.

    Raised for C of (1,1,...,1) and for D of a composition whose mass sits
    entirely in the first slot: the associated nilpotent matrix is zero and
    the moment-map square norm has no value there.
    """


class ZeroMatrixError(NilcurvError, ValueError):
    """The zero matrix was passed to an operation defined only away from 0."""


class NotNilpotentError(NilcurvError, ValueError):
    """A matrix expected to be nilpotent (at the working tolerance) is not."""
