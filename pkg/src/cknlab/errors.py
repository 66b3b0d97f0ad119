"""Semantic exception hierarchy.

Every rejected input maps to exactly one tag so callers (and the sweep
front end) can report machine-readable reasons instead of bare messages.
"""


class CknlabError(Exception):
    """Base class for all toolkit errors."""

    tag = "error"


class ParameterError(CknlabError, ValueError):
    """A raw parameter tuple violates an admissibility constraint."""

    def __init__(self, tag: str, message: str):
        super().__init__(message)
        self.tag = tag


class DomainError(CknlabError, ValueError):
    """Input is outside the mathematical domain of a closed-form expression."""

    tag = "domain"


class BoundaryExponentError(DomainError):
    """Closed form degenerates at an endpoint exponent (p = 2 or p = 2*)."""

    tag = "boundary-exponent"


class DegenerateDimensionError(DomainError):
    """Dimension makes an elimination step singular (division by d - 4)."""

    tag = "degenerate-dimension"


class ConvergenceError(CknlabError, RuntimeError):
    """Iterative solver failed to reach its tolerance."""

    tag = "convergence"

    def __init__(self, message: str, last_residual: float | None = None):
        super().__init__(message)
        self.last_residual = last_residual


class NoGroundStateError(CknlabError, RuntimeError):
    """Shooting map could not be bracketed (invalid p, d combination)."""

    tag = "no-ground-state"


class InconsistentProfileError(CknlabError, RuntimeError):
    """Moment identities violated far beyond quadrature tolerance."""

    tag = "inconsistent-profile"


class GridOverflowError(CknlabError, ValueError):
    """A constructed field does not fit inside the truncated cylinder."""

    tag = "grid-overflow"


class UndefinedEnergyError(CknlabError, ValueError):
    """Energy of the zero field is undefined."""

    tag = "undefined-energy"
