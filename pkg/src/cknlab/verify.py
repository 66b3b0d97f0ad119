"""Self-check suites: cross-validate the closed forms, the ground-state
moments and the minimizer against each other.

Each check returns a CheckResult; a suite is a named list of checks.  The
CLI's ``verify`` command prints one line per check and exits nonzero when
any check fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants as cf
from . import cylinder, ground_state
from .params import make_ckn_params, make_wlh_params

SUITES = ("identities", "closed-forms", "minimizer", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_residual: float
    detail: str = ""


def _check(name: str, residual: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(
        name=name, passed=bool(residual <= tol), worst_residual=float(residual),
        detail=detail or f"tolerance {tol:g}",
    )


# -- identities ---------------------------------------------------------------


def check_moment_identities() -> CheckResult:
    worst = 0.0
    for p, d in [(3.0, 3), (4.0, 3), (2.5, 5), (3.0, 5)]:
        profile = ground_state.solve_ground_state(p, d)
        m = ground_state.moments(profile)
        res = ground_state.moment_identity_residuals(m, p, d)
        worst = max(worst, max(res.values()))
    return _check("moment-identities", worst, 1e-6)


def check_product_inequality(n: int = 10000, seed: int = 7) -> CheckResult:
    """(1+x)^eta (1+y)^(1-eta) >= 1 + x^eta y^(1-eta) on random samples."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 10.0, n)
    y = rng.uniform(0.0, 10.0, n)
    eta = rng.uniform(1e-3, 1.0 - 1e-3, n)
    lhs = (1.0 + x) ** eta * (1.0 + y) ** (1.0 - eta)
    rhs = 1.0 + x**eta * y ** (1.0 - eta)
    worst = float(np.max(rhs - lhs))
    return _check("product-inequality", max(worst, 0.0), 1e-12)


def check_young_inequality(n: int = 10000, seed: int = 11) -> CheckResult:
    """eta x^(1/eta) + (1-eta) y^(1/(1-eta)) >= x y on random samples."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 5.0, n)
    y = rng.uniform(0.0, 5.0, n)
    eta = rng.uniform(1e-3, 1.0 - 1e-3, n)
    with np.errstate(over="ignore"):
        # overflow to inf on the large side only strengthens the bound
        lhs = eta * x ** (1.0 / eta) + (1.0 - eta) * y ** (1.0 / (1.0 - eta))
    worst = float(np.max(x * y - lhs))
    return _check("young-inequality", max(worst, 0.0), 1e-12)


def check_holder_log_estimate(n_fields: int = 1000, seed: int = 13) -> CheckResult:
    """Entropy bounded by the p-norm ratio for random discrete fields.

    int w^2 log(w^2/||w||_2^2) <= (p/(p-2)) ||w||_2^2 log(||w||_p^2/||w||_2^2)
    on a cylinder quadrature grid.
    """
    rng = np.random.default_rng(seed)
    spec = cylinder.GridSpec(L=5.0, n_s=41, n_xi=1)
    disc = cylinder.Discretization(3, spec)
    worst = -math.inf
    for p in (2.5, 3.0, 4.0):
        for _ in range(n_fields):
            w = rng.normal(0.0, 1.0, spec.n_s)
            n2 = disc.norm_sq(w)
            wn2 = w * w / n2
            ent = disc.integral(wn2 * np.log(np.maximum(wn2, 1e-300))) * n2
            np_norm = disc.norm_p(w, p)
            rhs = p / (p - 2.0) * n2 * math.log(np_norm**2 / n2)
            worst = max(worst, ent - rhs)
    return _check("holder-log-estimate", max(worst, 0.0), 1e-12)


# -- closed forms -------------------------------------------------------------


def check_theta_threshold_at_a_bar() -> CheckResult:
    worst = 0.0
    for d in range(2, 11):
        for p in np.linspace(2.1, 5.0, 10):
            worst = max(
                worst, abs(cf.theta_sb_threshold(cf.a_bar_sb(float(p), d), float(p), d) - 1.0)
            )
    return _check("theta-threshold-at-a-bar", worst, 1e-10)


def check_lambda_star_d3() -> CheckResult:
    r1 = abs(cf.lambda_star(3) - math.e / 4.0)
    r2 = abs(cf.a_star(3) - (0.5 - math.sqrt(math.e) / 2.0))
    return _check("lambda-star-d3", max(r1, r2), 1e-12)


def check_branch_continuity() -> CheckResult:
    worst = 0.0
    for d in (2, 3, 5):
        near = cf.wlh_radial(0.25 + 1e-8, -1.0, d).value
        exact = cf.wlh_radial(0.25, -1.0, d).value
        worst = max(worst, abs(near / exact - 1.0))
    return _check("wlh-branch-continuity", worst, 1e-6)


def check_threshold_reformulation() -> CheckResult:
    """Two algebraic routes to the symmetry-breaking bracket must agree."""
    worst = 0.0
    for d in range(2, 8):
        a_c = (d - 2) / 2.0
        for p in (2.5, 3.0, 4.0):
            for a in np.linspace(a_c - 3.0, a_c - 0.01, 7):
                lam = (a_c - a) ** 2
                direct = (p + 2.0) ** 2 * (
                    d * d + 4.0 * a * a - 4.0 * a * (d - 2.0)
                ) - 4.0 * p * (p + 4.0) * (d - 1.0)
                reform = 4.0 * ((p + 2.0) ** 2 * lam + 4.0 * (d - 1.0)) + 4.0 * (
                    d - 1.0
                ) * ((p + 2.0) ** 2 - p * (p + 4.0) - 4.0)
                scale = max(abs(direct), abs(reform), 1.0)
                worst = max(worst, abs(direct - reform) / scale)
    return _check("threshold-reformulation", worst, 1e-10)


def check_ls_domination() -> CheckResult:
    """Entropy-family radial constant dominates the log-Sobolev constant
    on the guaranteed weight interval, for d in {3, 4, 5}."""
    worst = -math.inf
    for d in (3, 4, 5):
        a_c = (d - 2) / 2.0
        a_lo = cf.a_star(d) + 1e-3
        ls = cf.gross_ls(d).value
        for a in np.linspace(a_lo, a_c - 1e-3, 20):
            worst = max(worst, ls - cf.wlh_radial(d / 4.0, float(a), d).value)
    return _check("ls-domination", max(worst, 0.0), 0.0, detail="strict inequality")


# -- minimizer ----------------------------------------------------------------


def check_radial_minimizer() -> CheckResult:
    params = make_ckn_params(3, 0.0, 4.0, 0.8)
    result = cylinder.minimize_radial_ckn(params, cylinder.GridSpec())
    closed = cf.ckn_radial(0.8, 4.0, 0.0, 3).value
    return _check(
        "radial-minimizer-vs-closed-form",
        abs(result.constant_estimate / closed - 1.0),
        1e-2,
    )


def check_wlh_minimizer() -> CheckResult:
    params = make_wlh_params(3, 0.0, 1.0)
    result = cylinder.minimize_wlh(params, cylinder.GridSpec())
    closed = cf.wlh_radial(1.0, 0.0, 3).value
    return _check(
        "wlh-minimizer-vs-closed-form",
        abs(result.constant_estimate / closed - 1.0),
        1e-2,
    )


def check_spreading_decay() -> CheckResult:
    """p = 2 spreading sequence decays toward the exact constant at rate n^-2."""
    theta, a, d = 0.5, 0.0, 3
    lam_th = ((d - 2) / 2.0 - a) ** (2 * theta)
    excess = [cylinder.spreading_sequence_demo(theta, a, d, n) - lam_th for n in (4, 8, 16)]
    worst = 0.0
    for lo, hi in zip(excess[1:], excess[:-1]):
        worst = max(worst, abs(hi / lo - 4.0))
    if min(excess) <= 0.0:
        worst = math.inf
    return _check("spreading-decay-rate", worst, 0.8, detail="ratio within 20% of 4")


_SUITE_CHECKS = {
    "identities": [
        check_moment_identities,
        check_product_inequality,
        check_young_inequality,
        check_holder_log_estimate,
    ],
    "closed-forms": [
        check_theta_threshold_at_a_bar,
        check_lambda_star_d3,
        check_branch_continuity,
        check_threshold_reformulation,
        check_ls_domination,
    ],
    "minimizer": [
        check_radial_minimizer,
        check_wlh_minimizer,
        check_spreading_decay,
    ],
}


def run_suite(suite: str) -> list[CheckResult]:
    """Run one named suite ('all' concatenates every suite in order)."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    names = ["identities", "closed-forms", "minimizer"] if suite == "all" else [suite]
    results = []
    for name in names:
        for check in _SUITE_CHECKS[name]:
            results.append(check())
    return results


def summarize(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name}  worst={r.worst_residual:.3e}  {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
