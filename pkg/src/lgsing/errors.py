"""Exception hierarchy shared by every layer of the package."""


class LGError(Exception):
    """Base class for all package errors."""


class ParseError(LGError, ValueError):
    """Malformed polynomial expression or problem file."""

    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ContextMismatch(LGError, ValueError):
    """Operands live over different rings or have incompatible shapes."""


class VariableCollision(LGError, ValueError):
    """Two rings that must be combined share a variable name."""


class IdentityViolation(LGError):
    """A defining identity (delta^2 = f, dh + hd = f, ...) fails.

    ``where`` names the identity, ``degree`` is set for graded objects and
    ``entry`` holds ``(row, col, difference)`` of the first offending entry.
    """

    def __init__(self, where, entry, degree=None):
        self.where = where
        self.entry = entry
        self.degree = degree
        row, col, diff = entry
        loc = f" in degree {degree}" if degree is not None else ""
        super().__init__(f"{where} violated{loc} at entry ({row}, {col}): difference {diff}")


class NotClosed(LGError):
    """A morphism expected to be a cocycle has nonzero differential."""


class ContractionInvalid(LGError):
    """Supplied contraction k does not satisfy dk + kd = id."""


class ResourceCapExceeded(LGError):
    """A configured computation budget ran out."""


class PeriodicityNotReached(ResourceCapExceeded):
    """Free resolution did not become 2-periodic within the step cap."""


class WindowTooSmall(LGError, ValueError):
    """Degree window does not contain the module or is narrower than required."""
