"""Numerical toolkit for weighted interpolation and logarithmic Hardy
inequalities: closed-form optimal constants, symmetry-breaking thresholds,
ground-state shooting, cylinder-functional minimization and region sweeps.
"""

__version__ = "0.1.0"

from .errors import (
    BoundaryExponentError,
    CknlabError,
    ConvergenceError,
    DegenerateDimensionError,
    DomainError,
    GridOverflowError,
    InconsistentProfileError,
    NoGroundStateError,
    ParameterError,
    UndefinedEnergyError,
)
from .params import (
    CknParams,
    WlhParams,
    critical_exponent,
    make_ckn_params,
    make_wlh_params,
    p_upper,
    theta_lower,
)

__all__ = [
    "__version__",
    "BoundaryExponentError",
    "CknlabError",
    "CknParams",
    "ConvergenceError",
    "critical_exponent",
    "DegenerateDimensionError",
    "DomainError",
    "GridOverflowError",
    "InconsistentProfileError",
    "make_ckn_params",
    "make_wlh_params",
    "NoGroundStateError",
    "ParameterError",
    "p_upper",
    "theta_lower",
    "UndefinedEnergyError",
    "WlhParams",
]
