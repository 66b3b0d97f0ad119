"""Closed-form optimal constants, thresholds and existence criteria.

All products of Gamma factors are assembled in log space (sum of
exponent * log(factor)) and exponentiated once at the end, so that large
dimensions or exponents close to 2 cannot overflow intermediate factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import BoundaryExponentError, DomainError
from .params import critical_exponent, theta_lower

ConstantKind = Literal["ckn_radial", "wlh_radial", "gross_ls", "gn", "p2_exact"]


@dataclass(frozen=True)
class ConstantValue:
    """A positive, finite optimal-constant value with its provenance."""

    value: float
    kind: ConstantKind
    params: dict = field(default_factory=dict)
    no_extremal: bool = False

    def __post_init__(self):
        if not (self.value > 0.0 and math.isfinite(self.value)):
            raise DomainError(f"constant must be positive finite, got {self.value}")


def _log_sphere_area(d: int) -> float:
    """log of the surface area of the unit sphere in R^d."""
    return math.log(2.0) + (d / 2.0) * math.log(math.pi) - math.lgamma(d / 2.0)


def ckn_radial_base(theta: float, p: float, d: int) -> ConstantValue:
    """Radial optimal constant of the interpolation family at unit lambda.

    Five-factor Gamma product; diverges as p -> 2 (the entropy family is the
    correct limit there) and requires 2 + (2 theta - 1) p > 0.
    """
    if p == 2.0:
        raise BoundaryExponentError("radial base constant diverges at p = 2")
    # p = 2* is admitted: at theta = 1 it is the critical Sobolev embedding.
    if not 2.0 < p <= critical_exponent(d) or d < 2:
        raise DomainError(f"require 2 < p <= 2* and d >= 2, got p = {p}, d = {d}")
    # tiny slack on the lower bound: theta_lower(2*, d) can round to 1 + 1 ulp
    if not theta_lower(p, d) - 1e-12 <= theta <= 1.0:
        raise DomainError(f"theta = {theta} outside [{theta_lower(p, d)}, 1]")
    q = 2.0 + (2.0 * theta - 1.0) * p
    if q <= 0.0:
        raise DomainError(f"require 2 + (2 theta - 1) p > 0, got {q}")
    log_c = (
        -(p - 2.0) / p * _log_sphere_area(d)
        + (p - 2.0) / (2.0 * p) * (2.0 * math.log(p - 2.0) - math.log(q))
        + theta * (math.log(q) - math.log(2.0 * p * theta))
        + (6.0 - p) / (2.0 * p) * (math.log(4.0) - math.log(p + 2.0))
        + (p - 2.0)
        / p
        * (
            math.lgamma(2.0 / (p - 2.0) + 0.5)
            - 0.5 * math.log(math.pi)
            - math.lgamma(2.0 / (p - 2.0))
        )
    )
    return ConstantValue(math.exp(log_c), "ckn_radial", {"theta": theta, "p": p, "d": d})


def ckn_radial(theta: float, p: float, a: float, d: int) -> ConstantValue:
    """Radial optimal constant at weight a: base value times lambda^((p-2)/(2p) - theta)."""
    a_c = (d - 2) / 2.0
    if not a < a_c:
        raise DomainError(f"require a < a_c = {a_c}, got a = {a}")
    base = ckn_radial_base(theta, p, d)
    lam = (a_c - a) ** 2
    exponent = (p - 2.0) / (2.0 * p) - theta
    value = base.value * lam**exponent
    return ConstantValue(value, "ckn_radial", {"theta": theta, "p": p, "a": a, "d": d})


def wlh_radial(gamma: float, a: float, d: int) -> ConstantValue:
    """Radial optimal constant of the entropy family, scaled by lambda^(-1 + 1/(4 gamma)).

    The closed form is well defined for any gamma >= 1/4 (with a separate
    branch exactly at gamma = 1/4); admissibility gamma >= d/4 is a property
    of the inequality, enforced at parameter-validation level, not here.
    """
    a_c = (d - 2) / 2.0
    if not a < a_c:
        raise DomainError(f"require a < a_c = {a_c}, got a = {a}")
    if gamma < 0.25:
        raise DomainError(f"closed form requires gamma >= 1/4, got {gamma}")
    if gamma == 0.25:
        log_base = 2.0 * math.lgamma(d / 2.0) - math.log(2.0) - (d + 1) * math.log(math.pi) - 1.0
    else:
        g4 = 4.0 * gamma
        log_base = (
            -math.log(g4)
            + (g4 - 1.0) / g4 * math.log(g4 - 1.0)
            - (math.log(2.0) + (d + 1) * math.log(math.pi) + 1.0) / g4
            + math.lgamma(d / 2.0) / (2.0 * gamma)
        )
    lam = (a_c - a) ** 2
    value = math.exp(log_base) * lam ** (-1.0 + 1.0 / (4.0 * gamma))
    return ConstantValue(value, "wlh_radial", {"gamma": gamma, "a": a, "d": d})


def gross_ls(d: int) -> ConstantValue:
    """Optimal constant of the scale-invariant logarithmic Sobolev inequality: 2/(pi d e)."""
    if d < 1:
        raise DomainError(f"require d >= 1, got {d}")
    return ConstantValue(2.0 / (math.pi * d * math.e), "gross_ls", {"d": d})


def ckn_p2_constant(theta: float, a: float, d: int) -> ConstantValue:
    """Exact optimal constant lambda^(-theta) at p = 2; never attained."""
    a_c = (d - 2) / 2.0
    if not 0.0 < theta < 1.0:
        raise DomainError(f"require 0 < theta < 1, got {theta}")
    if not a < a_c:
        raise DomainError(f"require a < a_c = {a_c}, got a = {a}")
    lam = (a_c - a) ** 2
    return ConstantValue(
        lam**-theta, "p2_exact", {"theta": theta, "a": a, "d": d}, no_extremal=True
    )


def theta_sb_threshold(a: float, p: float, d: int) -> float:
    """Upper threshold on theta below which symmetry breaking is proven.

    Quadratic in a with vertex at a = a_c; combined with ``a_bar_sb`` it
    delimits the proven symmetry-breaking region.
    """
    if d < 2 or p <= 2:
        raise DomainError(f"require d >= 2 and p > 2, got d = {d}, p = {p}")
    bracket = (p + 2.0) ** 2 * (d * d + 4.0 * a * a - 4.0 * a * (d - 2.0)) - 4.0 * p * (
        p + 4.0
    ) * (d - 1.0)
    return (p - 2.0) / (32.0 * (d - 1.0) * p) * bracket


def a_bar_sb(p: float, d: int) -> float:
    """Weight below which symmetry breaking holds for every admissible theta."""
    if d < 2 or p <= 2:
        raise DomainError(f"require d >= 2 and p > 2, got d = {d}, p = {p}")
    return (d - 2.0) / 2.0 - 2.0 * math.sqrt(d - 1.0) / math.sqrt((p - 2.0) * (p + 2.0))


def wlh_sb_threshold(a: float, d: int) -> float:
    """Entropy-parameter threshold 1/4 + (a - a_c)^2/(d-1).

    Symmetry breaking is proven for gamma below this value when a < -1/2.
    """
    if d < 2:
        raise DomainError(f"require d >= 2, got {d}")
    a_c = (d - 2) / 2.0
    return 0.25 + (a - a_c) ** 2 / (d - 1.0)


def lambda_star(d: int) -> float:
    """Spectral threshold (d-1) e (2^(d+1) pi)^(-1/(d-1)) Gamma(d/2)^(2/(d-1))."""
    if d < 3:
        raise DomainError(f"require d >= 3, got {d}")
    log_v = (
        math.log(d - 1.0)
        + 1.0
        - ((d + 1) * math.log(2.0) + math.log(math.pi)) / (d - 1.0)
        + 2.0 * math.lgamma(d / 2.0) / (d - 1.0)
    )
    return math.exp(log_v)


def a_star(d: int) -> float:
    """Weight threshold a_c - sqrt(lambda_star): above it the entropy-family
    radial constant strictly dominates the logarithmic Sobolev constant."""
    return (d - 2.0) / 2.0 - math.sqrt(lambda_star(d))


def a0_star(p: float, d: int) -> float:
    """Existence threshold for the scaling-critical theta, in the zero-slack limit.

    kappa is the ratio of the critical-embedding radial constant (raised to
    theta) and the radial constant at (theta, p); the threshold is
    a_c (1 - min(kappa^(-d/(2(d-1))), kappa^(d/2))) below a_c.
    """
    if d < 3:
        raise DomainError(f"require d >= 3, got {d}")
    p_crit = critical_exponent(d)
    if not 2.0 < p < p_crit:
        raise BoundaryExponentError(f"require 2 < p < 2* = {p_crit}, got p = {p}")
    theta = theta_lower(p, d)
    a_c = (d - 2) / 2.0
    log_c1 = math.log(ckn_radial_base(1.0, p_crit, d).value)
    log_ct = math.log(ckn_radial_base(theta, p, d).value)
    log_kappa = (theta * log_c1 - log_ct) / theta
    log_term = min(-d / (2.0 * (d - 1.0)) * log_kappa, d / 2.0 * log_kappa)
    return a_c - a_c * math.exp(log_term)


@dataclass(frozen=True)
class ThresholdReport:
    """All closed-form thresholds relevant at one parameter point.

    ``a0_star``, ``a_star`` and ``lambda_star`` require d >= 3 and are None
    for d = 2.
    """

    theta_sb: float
    a_bar_sb: float
    wlh_gamma_sb: float
    a0_star: float | None
    a_star: float | None
    lambda_star: float | None


def threshold_report(a: float, p: float, d: int) -> ThresholdReport:
    """Assemble every threshold printed by the theory at one (a, p, d) point."""
    if d >= 3:
        ls = lambda_star(d)
        ast = a_star(d)
        a0 = a0_star(p, d)
    else:
        ls = ast = a0 = None
    return ThresholdReport(
        theta_sb=theta_sb_threshold(a, p, d),
        a_bar_sb=a_bar_sb(p, d),
        wlh_gamma_sb=wlh_sb_threshold(a, d),
        a0_star=a0,
        a_star=ast,
        lambda_star=ls,
    )
