"""Parameter arithmetic and admissibility checks.

The two parameter families share the critical weight a_c = (d-2)/2 and the
spectral quantity lambda = (a_c - a)^2.  Weights a >= a_c are rejected
outright (the inversion that would map them back below a_c is out of scope),
and d = 1 is excluded everywhere.

The critical exponent for d = 2 is represented by an explicit +inf sentinel
(``math.inf``): comparisons then treat it as strictly greater than any
finite p, which avoids silent overflow in region sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError


def critical_exponent(d: int) -> float:
    """Sobolev critical exponent: 2d/(d-2) for d >= 3, +inf for d in {1, 2}."""
    if d <= 0:
        raise ParameterError("invalid-dimension", f"dimension must be positive, got {d}")
    if d <= 2:
        return math.inf
    return 2.0 * d / (d - 2)


def theta_lower(p: float, d: int) -> float:
    """Scaling-critical lower bound d(p-2)/(2p) for the interpolation parameter."""
    if d <= 0:
        raise ParameterError("invalid-dimension", f"dimension must be positive, got {d}")
    if p < 2:
        raise ParameterError("exponent-range", f"p must be >= 2, got {p}")
    return d * (p - 2.0) / (2.0 * p)


def p_upper(theta: float, d: int) -> float:
    """Largest admissible p for a given theta: 2d/(d - 2 theta), +inf at d = 2 theta."""
    if d < 2:
        raise ParameterError("invalid-dimension", f"dimension must be >= 2, got {d}")
    if not 0.0 <= theta <= 1.0:
        raise ParameterError("theta-range", f"theta must lie in [0, 1], got {theta}")
    if d == 2 * theta:
        return math.inf
    return 2.0 * d / (d - 2.0 * theta)


@dataclass(frozen=True)
class CknParams:
    """Validated parameter tuple (d, a, p, theta) with derived quantities.

    ``boundary`` is True at the admitted endpoints p = 2 or p = 2* (d >= 3);
    minimizers refuse those points, the closed forms handle them separately.
    """

    d: int
    a: float
    p: float
    theta: float

    @property
    def a_c(self) -> float:
        return (self.d - 2) / 2.0

    @property
    def b(self) -> float:
        return self.a - self.a_c + self.d / self.p

    @property
    def lam(self) -> float:
        return (self.a_c - self.a) ** 2

    @property
    def theta_min(self) -> float:
        return theta_lower(self.p, self.d)

    @property
    def boundary(self) -> bool:
        return self.p == 2.0 or self.p == critical_exponent(self.d)


@dataclass(frozen=True)
class WlhParams:
    """Validated parameter tuple (d, a, gamma) for the entropy-type family."""

    d: int
    a: float
    gamma: float

    @property
    def a_c(self) -> float:
        return (self.d - 2) / 2.0

    @property
    def lam(self) -> float:
        return (self.a_c - self.a) ** 2

    @property
    def boundary(self) -> bool:
        return self.gamma == self.d / 4.0


def make_ckn_params(d: int, a: float, p: float, theta: float) -> CknParams:
    """Validate raw inputs and return a ``CknParams``.

    Exactly one error tag is raised per rejected tuple, checked in the order
    dimension, weight-range, exponent-range, theta-range.
    """
    if not isinstance(d, int) or d < 2:
        raise ParameterError("invalid-dimension", f"dimension must be an integer >= 2, got {d}")
    a_c = (d - 2) / 2.0
    if not a < a_c:
        raise ParameterError("weight-range", f"require a < a_c = {a_c}, got a = {a}")
    p_crit = critical_exponent(d)
    if not (2.0 <= p <= p_crit):
        raise ParameterError(
            "exponent-range", f"require 2 <= p <= {p_crit} for d = {d}, got p = {p}"
        )
    th_min = theta_lower(p, d)
    if not (th_min <= theta <= 1.0):
        raise ParameterError(
            "theta-range", f"require {th_min} <= theta <= 1, got theta = {theta}"
        )
    return CknParams(d=d, a=a, p=p, theta=theta)


def make_wlh_params(d: int, a: float, gamma: float) -> WlhParams:
    """Validate raw inputs and return a ``WlhParams``."""
    if not isinstance(d, int) or d < 2:
        raise ParameterError("invalid-dimension", f"dimension must be an integer >= 2, got {d}")
    a_c = (d - 2) / 2.0
    if not a < a_c:
        raise ParameterError("weight-range", f"require a < a_c = {a_c}, got a = {a}")
    if gamma < d / 4.0 or (d == 2 and gamma <= 0.5):
        bound = "> 1/2" if d == 2 else f">= d/4 = {d / 4.0}"
        raise ParameterError("gamma-range", f"require gamma {bound}, got gamma = {gamma}")
    return WlhParams(d=d, a=a, gamma=gamma)
