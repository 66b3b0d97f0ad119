"""Radial ground state of -u'' - (d-1)/r u' + u = u^(p-1) by shooting.

The initial height u(0) is found by bisection on the shooting map: too high
and u crosses zero (overshoot), too low and u' turns positive while u > 0
(undershoot).  The bracket is refined to floating-point resolution, the
trajectory is integrated to a switch radius where the equation has
linearized, and the exact decaying solution of the linearized equation
(a modified Bessel function) continues the profile outward.

Moments carry the ground-state identities obtained by multiplying the
equation by u r^(d-1), r u' r^(d-1) and their r^2-weighted companions; they
are the backbone of the second-order expansion R = R1 t + R0 that yields the
existence interval of ``a_bar_existence``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.special import kv, kvp

from .constants import ConstantValue, _log_sphere_area
from .errors import (
    ConvergenceError,
    DegenerateDimensionError,
    DomainError,
    InconsistentProfileError,
    NoGroundStateError,
)
from .params import critical_exponent, theta_lower

_R_CAP = 50.0
_U_SWITCH_REL = 1e-5  # switch to the Bessel tail once u drops below this * u0
_U_END_REL = 1e-12  # extend the sampled tail down to this * u0


@dataclass(frozen=True)
class RadialProfile:
    """Sampled ground state with enough tail metadata to correct moments."""

    p: float
    d: int
    r_grid: np.ndarray
    u_values: np.ndarray
    du_values: np.ndarray
    u0: float
    r_max: float
    tail_rate: float
    # Bessel-tail continuation data: u(r) = tail_coef * r^(1-d/2) K_(d/2-1)(r)
    # for r >= r_switch; n_core grid points precede the tail samples.
    tail_coef: float
    r_switch: float
    n_core: int


@dataclass(frozen=True)
class MomentSet:
    """The six radial moments with weights r^(d-1) and r^(d+1)."""

    x0: float
    y0: float
    z0: float
    x2: float
    y2: float
    z2: float


@dataclass(frozen=True)
class RCoefficients:
    """Second-order expansion coefficients: R = r1 * t + r0 with t = y2/y0.

    ``r_direct`` evaluates the expansion from all six measured moments;
    ``r_value`` uses the identity-based elimination (d >= 5 only, None below).
    """

    r0: float | None
    r1: float | None
    t: float
    r_value: float | None
    r_direct: float


def _rhs(p: float, d: int):
    def f(r, y):
        u, du = y
        return (du, u - np.sign(u) * np.abs(u) ** (p - 1.0) - (d - 1.0) / r * du)

    return f


def _shoot(u0: float, p: float, d: int, r_end: float = _R_CAP):
    """Integrate from the series start; terminal events catch over/undershoot."""
    r0 = 1e-6
    c2 = (u0 - u0 ** (p - 1.0)) / (2.0 * d)
    y0 = (u0 + c2 * r0 * r0, 2.0 * c2 * r0)

    def hit_zero(r, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    def turn_up(r, y):
        return y[1]

    turn_up.terminal = True
    turn_up.direction = 1

    sol = solve_ivp(
        _rhs(p, d),
        (r0, r_end),
        y0,
        events=(hit_zero, turn_up),
        rtol=1e-12,
        atol=1e-14 * u0,
        dense_output=True,
        method="RK45",
    )
    return sol


def _classify(sol) -> str:
    if sol.t_events[0].size:
        return "overshoot"
    if sol.t_events[1].size:
        return "undershoot"
    return "neither"


def solve_ground_state(p: float, d: int, tol: float = 1e-12) -> RadialProfile:
    """Compute the positive decreasing ground state profile.

    ``tol`` is the relative bisection tolerance on u(0); the bracket starts
    at [1, 10] and is doubled upward until it overshoots.
    """
    if d < 2:
        raise DomainError(f"require d >= 2, got {d}")
    if not 2.0 < p < critical_exponent(d):
        raise DomainError(f"require 2 < p < 2*, got p = {p} at d = {d}")
    if tol <= 0:
        raise DomainError(f"require tol > 0, got {tol}")

    lo, hi = 1.0, 10.0
    if _classify(_shoot(lo, p, d)) == "overshoot":
        raise NoGroundStateError(f"lower bracket u0 = {lo} already overshoots (p={p}, d={d})")
    n_double = 0
    while _classify(_shoot(hi, p, d)) != "overshoot":
        hi *= 2.0
        n_double += 1
        if n_double > 12:
            raise NoGroundStateError(f"no overshoot up to u0 = {hi} (p={p}, d={d})")

    # Bisect down to max(tol, float resolution); each step is one integration.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _classify(_shoot(mid, p, d)) == "overshoot":
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * lo:
            break
    u0 = 0.5 * (lo + hi)

    # Final trajectory: stop at the matching height where the tail takes over.
    u_switch = _U_SWITCH_REL * u0

    def reach_switch(r, y):
        return y[0] - u_switch

    reach_switch.terminal = True
    reach_switch.direction = -1

    def bad_zero(r, y):
        return y[0]

    bad_zero.terminal = True
    bad_zero.direction = -1

    def bad_turn(r, y):
        return y[1]

    bad_turn.terminal = True
    bad_turn.direction = 1

    r0 = 1e-6
    c2 = (u0 - u0 ** (p - 1.0)) / (2.0 * d)
    sol = solve_ivp(
        _rhs(p, d),
        (r0, _R_CAP),
        (u0 + c2 * r0 * r0, 2.0 * c2 * r0),
        events=(reach_switch, bad_zero, bad_turn),
        rtol=1e-12,
        atol=1e-16 * u0,
        dense_output=True,
        method="RK45",
    )
    if not sol.t_events[0].size:
        raise ConvergenceError(
            f"trajectory failed to reach the tail-matching height (p={p}, d={d}); "
            "tighten tol",
            last_residual=float(sol.y[0, -1]),
        )
    r_switch = float(sol.t_events[0][0])

    # Core samples on a uniform grid (even count of intervals for Simpson).
    n_core = 6001
    r_core = np.linspace(r0, r_switch, n_core)
    y_core = sol.sol(r_core)
    u_core, du_core = y_core[0], y_core[1]

    # Exact decaying solution of the linearized equation: r^(1-d/2) K_(d/2-1)(r).
    nu = d / 2.0 - 1.0

    def tail_u(r):
        return r ** (1.0 - d / 2.0) * kv(nu, r)

    def tail_du(r):
        return (1.0 - d / 2.0) * r ** (-d / 2.0) * kv(nu, r) + r ** (1.0 - d / 2.0) * kvp(
            nu, r
        )

    coef = u_switch / tail_u(r_switch)

    # Find r_max where the tail drops to the sampling floor (capped).
    u_end = _U_END_REL * u0
    r_hi = r_switch
    while coef * tail_u(min(r_hi, _R_CAP)) > u_end and r_hi < _R_CAP:
        r_hi = min(r_hi + 5.0, _R_CAP)
    if r_hi < _R_CAP:
        from scipy.optimize import brentq

        r_max = brentq(lambda r: coef * tail_u(r) - u_end, r_switch, r_hi)
    else:
        r_max = _R_CAP

    n_tail = 2001
    r_tail = np.linspace(r_switch, r_max, n_tail)[1:]
    u_tail = coef * tail_u(r_tail)
    du_tail = coef * tail_du(r_tail)

    r_grid = np.concatenate([r_core, r_tail])
    u_values = np.concatenate([u_core, u_tail])
    du_values = np.concatenate([du_core, du_tail])

    # Fitted decay constant over the last decade of samples.
    mask = u_values <= 10.0 * u_end
    if mask.sum() >= 2:
        slope = np.polyfit(r_grid[mask], np.log(u_values[mask]), 1)[0]
        tail_rate = -float(slope)
    else:
        tail_rate = 1.0

    return RadialProfile(
        p=p,
        d=d,
        r_grid=r_grid,
        u_values=u_values,
        du_values=du_values,
        u0=u0,
        r_max=float(r_max),
        tail_rate=tail_rate,
        tail_coef=coef,
        r_switch=r_switch,
        n_core=n_core,
    )


def equation_residual(profile: RadialProfile) -> float:
    """Max |u'' + (d-1)/r u' - u + u^(p-1)| / u(0) over interior core nodes.

    u'' is recovered from the stored derivative by a 4th-order central
    difference, so the estimate is quadrature-limited, not solver-limited.
    """
    n = profile.n_core
    r = profile.r_grid[:n]
    u = profile.u_values[:n]
    du = profile.du_values[:n]
    h = r[1] - r[0]
    i = np.arange(2, n - 2)
    d2u = (-du[i + 2] + 8.0 * du[i + 1] - 8.0 * du[i - 1] + du[i - 2]) / (12.0 * h)
    res = d2u + (profile.d - 1.0) / r[i] * du[i] - u[i] + u[i] ** (profile.p - 1.0)
    return float(np.max(np.abs(res)) / profile.u0)


def _simpson_piecewise(f: np.ndarray, r: np.ndarray, n_core: int) -> float:
    from scipy.integrate import simpson

    core = simpson(f[:n_core], x=r[:n_core])
    tail = simpson(f[n_core - 1 :], x=r[n_core - 1 :])
    return float(core + tail)


def moments(profile: RadialProfile, identity_tol: float = 1e-4) -> MomentSet:
    """Six moments by composite quadrature plus the analytic tail remainder.

    Raises ``InconsistentProfileError`` when any of the four ground-state
    identities is violated beyond ``identity_tol`` (relative).
    """
    r, u, du = profile.r_grid, profile.u_values, profile.du_values
    p, d, nc = profile.p, profile.d, profile.n_core

    def rad_int(f):
        return _simpson_piecewise(f, r, nc)

    w0 = r ** (d - 1.0)
    w2 = r ** (d + 1.0)
    vals = {
        "x0": rad_int(du**2 * w0),
        "y0": rad_int(u**2 * w0),
        "z0": rad_int(u**p * w0),
        "x2": rad_int(du**2 * w2),
        "y2": rad_int(u**2 * w2),
        "z2": rad_int(u**p * w2),
    }

    # Remainder beyond r_max from the Bessel continuation.
    nu = d / 2.0 - 1.0
    coef = profile.tail_coef

    def tu(rr):
        return coef * rr ** (1.0 - d / 2.0) * kv(nu, rr)

    def tdu(rr):
        return coef * (
            (1.0 - d / 2.0) * rr ** (-d / 2.0) * kv(nu, rr)
            + rr ** (1.0 - d / 2.0) * kvp(nu, rr)
        )

    r_hi = profile.r_max + 40.0
    for name, fn, k in (
        ("x0", tdu, d - 1.0),
        ("y0", tu, d - 1.0),
        ("z0", tu, d - 1.0),
        ("x2", tdu, d + 1.0),
        ("y2", tu, d + 1.0),
        ("z2", tu, d + 1.0),
    ):
        power = p if name.startswith("z") else 2.0
        val, _ = quad(
            lambda rr: np.abs(fn(rr)) ** power * rr**k, profile.r_max, r_hi, limit=200
        )
        vals[name] += val

    m = MomentSet(**vals)
    residuals = moment_identity_residuals(m, p, d)
    worst = max(abs(v) for v in residuals.values())
    if worst > identity_tol:
        raise InconsistentProfileError(
            f"moment identity residual {worst:.3e} exceeds {identity_tol:.1e}"
        )
    return m


def moment_identity_residuals(m: MomentSet, p: float, d: int) -> dict[str, float]:
    """Relative residuals of the four ground-state identities."""
    return {
        "eq1": (m.x0 + m.y0 - m.z0) / m.z0,
        "eq2": ((d - 2.0) / 2.0 * m.x0 + d / 2.0 * m.y0 - d / p * m.z0) / m.z0,
        "eq3": (m.x2 - d * m.y0 + m.y2 - m.z2) / m.z2,
        "eq4": ((d - 4.0) / 2.0 * m.x2 + (d + 2.0) / 2.0 * m.y2 - (d + 2.0) / p * m.z2)
        / m.z2,
    }


def gn_constant(p: float, d: int, profile: RadialProfile | None = None) -> ConstantValue:
    """Optimal interpolation constant evaluated on the ground state.

    The sphere-area factor enters each norm consistently; it cancels in all
    moment ratios but not here.
    """
    if profile is None:
        profile = solve_ground_state(p, d)
    m = moments(profile)
    theta = theta_lower(p, d)
    log_w = _log_sphere_area(d)
    log_inv = (
        theta * (log_w + math.log(m.x0))
        + (1.0 - theta) * (log_w + math.log(m.y0))
        - (2.0 / p) * (log_w + math.log(m.z0))
    )
    return ConstantValue(math.exp(-log_inv), "gn", {"p": p, "d": d})


def r_gamma(gamma: float, d: int) -> float:
    """Moment-expansion kernel (2/d) gamma (gamma - a_c)."""
    return 2.0 / d * gamma * (gamma - (d - 2.0) / 2.0)


def _split_coefficients(p: float, d: int):
    """Closed-form (R0(a), R1(a)) as quadratic polynomials in a.

    Derived by eliminating the r^2-weighted moments through the identities:
    only the ratio t = y2/y0 survives.  Requires d >= 5 (division by d - 4
    appears through the denominator 2(d+2) - (d-4)p).
    """
    if d < 5:
        raise DegenerateDimensionError(f"split requires d >= 5, got {d}")
    theta = theta_lower(p, d)
    a_c = (d - 2.0) / 2.0
    # inverted moment ratios: y0/x0 and y0/z0 vanish as p approaches the
    # critical exponent (2d - (d-2)p -> 0), keeping the endpoint admissible
    num = 2.0 * d - (d - 2.0) * p
    inv_rho = num / (d * (p - 2.0))  # y0 / x0
    inv_z0 = num / (num + d * (p - 2.0))  # y0 / z0
    den = 2.0 * (d + 2.0) - (d - 4.0) * p
    alpha_z = p * d * (d - 4.0) / den  # z2/y0 = alpha_z + beta_z t
    beta_z = 6.0 * p / den
    alpha_x = alpha_z + d  # x2/y0 = alpha_x + beta_x t
    beta_x = beta_z - 1.0

    def r_quad(mult: float, shift: float) -> np.polynomial.Polynomial:
        # r(mult*a + shift) as a polynomial in a
        c2 = 2.0 / d * mult * mult
        c1 = 2.0 / d * mult * (2.0 * shift - a_c)
        c0 = 2.0 / d * shift * (shift - a_c)
        return np.polynomial.Polynomial([c0, c1, c2])

    r_a = r_quad(1.0, 0.0)
    r_a1 = r_quad(1.0, 1.0)
    r_bp2 = r_quad(p / 2.0, d / 2.0 - p / 2.0 * a_c)  # b p/2 = (p/2)(a - a_c) + d/2

    r1 = theta * r_a * (beta_x * inv_rho) + (1.0 - theta) * r_a1 - (
        2.0 / p
    ) * r_bp2 * (beta_z * inv_z0)
    r0 = theta * r_a * (alpha_x * inv_rho) - (2.0 / p) * r_bp2 * (alpha_z * inv_z0)
    return r0, r1


def r_expansion(a: float, p: float, d: int, m: MomentSet) -> RCoefficients:
    """Expansion coefficient R at weight a, by both routes.

    The direct route uses all six measured moments; the split route (d >= 5)
    eliminates the r^2-weighted moments through the identities and keeps only
    t = y2/y0.  For d < 5 the split fields are None.
    """
    theta = theta_lower(p, d)
    a_c = (d - 2.0) / 2.0
    b = a - a_c + d / p
    t = m.y2 / m.y0
    direct = (
        theta * r_gamma(a, d) * m.x2 / m.x0
        + (1.0 - theta) * r_gamma(a + 1.0, d) * t
        - 2.0 / p * r_gamma(b * p / 2.0, d) * m.z2 / m.z0
    )
    if d >= 5:
        poly_r0, poly_r1 = _split_coefficients(p, d)
        r0 = float(poly_r0(a))
        r1 = float(poly_r1(a))
        return RCoefficients(r0=r0, r1=r1, t=t, r_value=r1 * t + r0, r_direct=direct)
    return RCoefficients(r0=None, r1=None, t=t, r_value=None, r_direct=direct)


def r_at_critical_weight(p: float, d: int, t: float) -> float:
    """Closed form of R at a = a_c in terms of t = y2/y0."""
    return (
        -(d - 4.0)
        / (2.0 * p)
        * (2.0 * d - (d - 2.0) * p)
        / (2.0 * (d + 2.0) - (d - 4.0) * p)
        * (2.0 * d + (p - 2.0) * t)
    )


@dataclass(frozen=True)
class ExistenceInterval:
    """Largest interval (lower, a_c) on which both split coefficients are negative."""

    lower: float
    upper: float
    empty: bool
    diagnostic: str = ""


def a_bar_existence(p: float, d: int) -> ExistenceInterval:
    """Sufficient-condition interval: both R1(a) < 0 and R0(a) < 0 up to a_c."""
    if d < 5:
        raise DegenerateDimensionError(f"requires d >= 5, got {d}")
    if not 2.0 < p <= critical_exponent(d):
        raise DomainError(f"require 2 < p <= 2*, got p = {p} at d = {d}")
    a_c = (d - 2.0) / 2.0
    poly_r0, poly_r1 = _split_coefficients(p, d)
    probe = a_c - 1e-9
    if poly_r0(probe) >= 0.0 or poly_r1(probe) >= 0.0:
        return ExistenceInterval(
            lower=math.nan,
            upper=a_c,
            empty=True,
            diagnostic=(
                f"coefficients not both negative near a_c: "
                f"R0({probe}) = {poly_r0(probe):.3e}, R1({probe}) = {poly_r1(probe):.3e}"
            ),
        )
    lower = -math.inf
    for poly in (poly_r0, poly_r1):
        roots = poly.roots()
        real = [float(z.real) for z in np.atleast_1d(roots) if abs(z.imag) < 1e-9]
        below = [z for z in real if z < a_c - 1e-12]
        if below:
            lower = max(lower, max(below))
    return ExistenceInterval(lower=lower, upper=a_c, empty=False)


def profile_to_csv(profile: RadialProfile, path: str) -> None:
    """Write the sampled profile as a two-column CSV (r, u)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "u"])
        for rr, uu in zip(profile.r_grid, profile.u_values):
            writer.writerow([format(rr, ".17g"), format(uu, ".17g")])
