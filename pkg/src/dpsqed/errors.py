"""Exception hierarchy shared by every module."""


class DpsError(Exception):
    """Base class for library errors."""


class ValidationError(DpsError, ValueError):
    """Input violates a documented precondition."""


class QuadratureError(DpsError, RuntimeError):
    """A quadrature or series failed to reach its tolerance."""


class SingularPointError(DpsError, ValueError):
    """A smooth part was evaluated on (or too close to) a spike manifold."""


class OutOfRegimeError(DpsError, ValueError):
    """Arguments lie outside the validity range of an asymptotic formula."""
