"""Exception hierarchy shared across the library.

The CLI maps each class to a machine-parsable single-line error message, so
error types are part of the public contract.
"""


class LapspecError(Exception):
    """Base class for all library errors."""


class ValidationError(LapspecError):
    """Input violates a documented precondition or invariant."""


class CapacityError(LapspecError):
    """Request exceeds what the input can support (e.g. more edge removals
    than edges, or a brute-force search beyond the factorial cap)."""


class NumericalError(LapspecError):
    """Numerical preconditions broken: non-finite entries, or a kernel
    matrix that is not positive semidefinite beyond tolerance."""


class IoError(LapspecError):
    """Missing or unreadable dataset files."""


class FormatError(LapspecError):
    """Dataset files exist but their content violates the TU format."""
