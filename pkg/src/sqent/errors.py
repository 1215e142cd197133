"""Exception hierarchy shared by every module.

All errors the CLI maps to exit code 1 derive from :class:`SqentError`.
"""


class SqentError(Exception):
    pass


class ValidationError(SqentError, ValueError):
    """Malformed input: wrong shape, not Hermitian, not normalized, bad indices."""


class NotAStateError(ValidationError):
    """Matrix has eigenvalues too negative to be a density matrix."""


class DomainError(SqentError, ValueError):
    """Scalar parameter outside the domain of the formula."""


class PreconditionError(SqentError, ValueError):
    pass


class ResourceError(SqentError, RuntimeError):
    """Requested matrix would exceed the configured size limit."""


class TruncationError(SqentError, RuntimeError):
    """Fock-space cutoff too small for the requested state."""


class AmbiguityError(SqentError, RuntimeError):
    """Minimal eigenspace is degenerate, so the vacuum is not unique."""
