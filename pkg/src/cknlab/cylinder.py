"""Discretized cylinder functionals and constrained minimization.

Fields live on the truncated cylinder [-L, L] x sphere; after angular
reduction only the colatitude survives (for d >= 3; for d = 2 the full
periodic angle is kept).  Norms use the measure ds * w_sphere sin^(d-2)(xi)
d(xi); the s-ends are Dirichlet (extension by zero), the colatitude poles
carry the natural no-flux condition.

The gradient energy is assembled in flux form, so its exact discrete
gradient is available in closed form and projected Barzilai-Borwein descent
(with step-halving safeguard) minimizes either functional under its norm
constraint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, GridOverflowError, UndefinedEnergyError
from .params import CknParams, WlhParams, make_ckn_params

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class GridSpec:
    """Cylinder discretization and solver controls."""

    L: float = 20.0
    n_s: int = 801
    n_xi: int = 1
    tol: float = 1e-8
    max_iter: int = 20000
    residual_tol: float = 1e-5


@dataclass
class CylinderField:
    """Values on the (s, xi) grid; n_xi = 1 means an s-only (radial) field."""

    d: int
    s_grid: np.ndarray
    xi_grid: np.ndarray | None
    values: np.ndarray  # shape (n_s,) or (n_s, n_xi)


@dataclass
class MinimizeResult:
    constant_estimate: float
    field: CylinderField
    el_residual: float
    iterations: int
    converged: bool
    energy: float
    history: dict = field(default_factory=dict)


def _sphere_area(d: int) -> float:
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


class Discretization:
    """Quadrature weights and flux-form gradient energy on the grid."""

    def __init__(self, d: int, spec: GridSpec):
        if d < 2:
            raise DomainError(f"require d >= 2, got {d}")
        self.d = d
        self.spec = spec
        self.s = np.linspace(-spec.L, spec.L, spec.n_s)
        self.h_s = self.s[1] - self.s[0]
        self.periodic_xi = False
        if spec.n_xi == 1:
            self.xi = None
            self.w_xi = np.array([_sphere_area(d)])
            self.sigma_half = None
        elif d == 2:
            # full angle on the circle, periodic, weight 1
            self.periodic_xi = True
            self.xi = np.linspace(0.0, 2.0 * math.pi, spec.n_xi, endpoint=False)
            self.h_xi = self.xi[1] - self.xi[0]
            self.w_xi = np.full(spec.n_xi, self.h_xi)
            self.sigma_half = np.ones(spec.n_xi)
        else:
            self.xi = np.linspace(0.0, math.pi, spec.n_xi)
            self.h_xi = self.xi[1] - self.xi[0]
            w_sub = _sphere_area(d - 1)  # area of the (d-2)-sphere
            sigma = np.sin(self.xi) ** (d - 2)
            w = sigma * self.h_xi
            # pole nodes: half-cell integral of sin^(d-2), which behaves like
            # xi^(d-2); the midpoint value sin(0) = 0 would zero their measure
            w[0] = w[-1] = (self.h_xi / 2.0) ** (d - 1) / (d - 1)
            self.w_xi = w_sub * w
            half = self.xi[:-1] + 0.5 * self.h_xi
            self.sigma_half = w_sub * np.sin(half) ** (d - 2)
        self.W = self.h_s * self.w_xi[np.newaxis, :]  # (1, n_xi), broadcast over s

    # -- norms ---------------------------------------------------------------

    def _as2d(self, v: np.ndarray) -> np.ndarray:
        return v[:, np.newaxis] if v.ndim == 1 else v

    def integral(self, f: np.ndarray) -> float:
        return float(np.sum(self._as2d(f) * self.W))

    def norm_sq(self, v: np.ndarray) -> float:
        return self.integral(v * v)

    def norm_p(self, v: np.ndarray, p: float) -> float:
        return self.integral(np.abs(v) ** p) ** (1.0 / p)

    # -- gradient energy -----------------------------------------------------

    def grad_energy(self, v: np.ndarray) -> float:
        """Flux-form discrete Dirichlet energy, with zero extension in s."""
        v2 = self._as2d(v)
        ds = np.diff(v2, axis=0)
        g = float(np.einsum("ij,j->", ds * ds, self.w_xi)) / self.h_s
        g += float(np.dot(v2[0] ** 2 + v2[-1] ** 2, self.w_xi)) / self.h_s
        if v2.shape[1] > 1:
            if self.periodic_xi:
                dxi = np.roll(v2, -1, axis=1) - v2
                g += float(np.sum(dxi * dxi)) * self.h_s / self.h_xi
            else:
                dxi = np.diff(v2, axis=1)
                g += (
                    float(np.einsum("ij,j->", dxi * dxi, self.sigma_half))
                    * self.h_s
                    / self.h_xi
                )
        return g

    def grad_energy_gradient(self, v: np.ndarray) -> np.ndarray:
        """Exact derivative of ``grad_energy`` with respect to the node values."""
        v2 = self._as2d(v)
        out = np.zeros_like(v2)
        # s-direction, with zero ghost values beyond the ends
        out[1:] += v2[1:] - v2[:-1]
        out[:-1] -= v2[1:] - v2[:-1]
        out[0] += v2[0]
        out[-1] += v2[-1]
        out = out * (2.0 / self.h_s) * self.w_xi[np.newaxis, :]
        if v2.shape[1] > 1:
            if self.periodic_xi:
                dxi = np.roll(v2, -1, axis=1) - v2
                gxi = np.zeros_like(v2)
                gxi -= dxi
                gxi += np.roll(dxi, 1, axis=1)
                out += gxi * (2.0 * self.h_s / self.h_xi)
            else:
                dxi = np.diff(v2, axis=1) * self.sigma_half[np.newaxis, :]
                gxi = np.zeros_like(v2)
                gxi[:, 1:] += dxi
                gxi[:, :-1] -= dxi
                out += gxi * (2.0 * self.h_s / self.h_xi)
        return out if v.ndim == 2 else out[:, 0]

    def laplacian(self, v: np.ndarray) -> np.ndarray:
        """Discrete -Laplace operator consistent with the flux-form energy."""
        g = self._as2d(self.grad_energy_gradient(v))
        return (g / (2.0 * self.W)) if v.ndim == 2 else (g / (2.0 * self.W))[:, 0]


# -- energies ----------------------------------------------------------------


def energy_ckn(disc: Discretization, v: np.ndarray, params: CknParams) -> float:
    """Scale-invariant interpolation quotient (G + lam N)^theta N^(1-theta) / P_p."""
    n2 = disc.norm_sq(v)
    if n2 == 0.0:
        raise UndefinedEnergyError("zero field")
    g = disc.grad_energy(v)
    pp = disc.norm_p(v, params.p) ** 2
    return (g + params.lam * n2) ** params.theta * n2 ** (1.0 - params.theta) / pp


def energy_wlh(disc: Discretization, w: np.ndarray, params: WlhParams) -> float:
    """Scale-invariant entropy quotient.

    (G + lam N)/N times exp of minus the normalized entropy over 2 gamma;
    at unit L2 norm this is the constrained functional exactly.
    """
    n2 = disc.norm_sq(w)
    if n2 == 0.0:
        raise UndefinedEnergyError("zero field")
    g = disc.grad_energy(w)
    wn2 = w * w / n2
    ent = disc.integral(wn2 * np.log(np.maximum(wn2, _LOG_FLOOR)))
    return (g + params.lam * n2) / n2 * math.exp(-ent / (2.0 * params.gamma))


# -- projected Barzilai-Borwein descent --------------------------------------


def _bb_minimize(
    x0, value_and_grad, project, tangent, max_iter, tol, residual_fn, residual_tol
):
    """Projected gradient descent with Barzilai-Borwein steps and halving.

    ``tangent`` removes the gradient component normal to the constraint
    manifold (renormalization would annihilate it anyway, and leaving it in
    distorts the BB step estimate).  ``residual_fn`` is the stationarity
    check; convergence means it dropped below ``residual_tol``.
    """
    x = project(x0)
    f, g = value_and_grad(x)
    g = tangent(x, g)
    step = 1e-3 / (np.max(np.abs(g)) + 1e-30)
    x_prev = g_prev = None
    it = 0
    failures = 0
    stall = 0
    for it in range(1, max_iter + 1):
        if x_prev is not None:
            dx = x - x_prev
            dg = g - g_prev
            denom = float(np.sum(dx * dg))
            if denom > 0:
                step = float(np.sum(dx * dx)) / denom  # BB1
            step = min(max(step, 1e-14), 1e6)
        accepted = False
        s = step
        for _ in range(50):
            x_new = project(x - s * g)
            f_new, g_new = value_and_grad(x_new)
            g_new = tangent(x_new, g_new)
            if f_new <= f * (1.0 + 1e-14):
                accepted = True
                break
            s *= 0.5
        if not accepted:
            failures += 1
            if failures > 5:
                break
            x_prev = g_prev = None  # reset BB memory, restart with a small step
            step = 1e-6 / (np.max(np.abs(g)) + 1e-30)
            continue
        failures = 0
        stall = stall + 1 if abs(f - f_new) <= tol * abs(f) else 0
        x_prev, g_prev = x, g
        x, f, g = x_new, f_new, g_new
        if it % 20 == 0 or stall >= 500:
            if residual_fn(x) < residual_tol:
                break
            if stall >= 500:
                break
    residual = residual_fn(x)
    return x, f, residual, it


def _ckn_value_grad(disc: Discretization, params: CknParams):
    lam, theta, p = params.lam, params.theta, params.p

    def fg(v):
        g_en = disc.grad_energy(v)
        n2 = disc.norm_sq(v)
        e = g_en + lam * n2
        f = e**theta * n2 ** (1.0 - theta)
        gg = disc.grad_energy_gradient(v)
        w = disc.W if v.ndim == 2 else disc.W[:, 0]
        grad = theta * e ** (theta - 1.0) * n2 ** (1.0 - theta) * (
            gg + 2.0 * lam * w * v
        ) + (1.0 - theta) * e**theta * n2**-theta * 2.0 * w * v
        return f, grad

    return fg


def _ckn_residual(disc: Discretization, params: CknParams):
    lam, theta, p = params.lam, params.theta, params.p

    def res(v):
        g_en = disc.grad_energy(v)
        n2 = disc.norm_sq(v)
        t = g_en / n2
        j = (g_en + lam * n2) ** theta * n2 ** (1.0 - theta)
        rhs = j * (t + lam) ** (1.0 - theta) * np.abs(v) ** (p - 2.0) * v
        lhs = theta * disc.laplacian(v) + ((1.0 - theta) * t + lam) * v
        num = math.sqrt(disc.norm_sq(lhs - rhs))
        den = math.sqrt(disc.norm_sq(rhs))
        return num / den if den > 0 else math.inf

    return res


def _wlh_value_grad(disc: Discretization, params: WlhParams):
    lam, gamma = params.lam, params.gamma
    w = disc.W

    def fg(x):
        # constraint N = 1 is maintained by projection
        g_en = disc.grad_energy(x)
        x2 = np.maximum(x * x, _LOG_FLOOR)
        logx2 = np.log(x2)
        ent = disc.integral(x * x * logx2)
        e = math.exp(-ent / (2.0 * gamma))
        f = (g_en + lam) * e
        ww = w if x.ndim == 2 else w[:, 0]
        gg = disc.grad_energy_gradient(x)
        grad = e * (gg - (g_en + lam) / (2.0 * gamma) * 2.0 * ww * x * (logx2 + 1.0))
        return f, grad

    return fg


def _wlh_residual(disc: Discretization, params: WlhParams):
    lam, gamma = params.lam, params.gamma

    def res(x):
        g_en = disc.grad_energy(x)
        x2 = np.maximum(x * x, _LOG_FLOOR)
        lhs = disc.laplacian(x) - (g_en + lam) / (2.0 * gamma) * x * (1.0 + np.log(x2))
        mu = disc.integral(x * lhs)
        r = lhs - mu * x
        scale = math.sqrt(disc.norm_sq(lhs)) + abs(mu)
        return math.sqrt(disc.norm_sq(r)) / scale if scale > 0 else math.inf

    return res


def _sech_profile(disc: Discretization, params: CknParams) -> np.ndarray:
    kappa = math.sqrt(params.lam) * (params.p - 2.0) / 2.0
    prof = 1.0 / np.cosh(np.clip(kappa * disc.s, -300, 300)) ** (2.0 / (params.p - 2.0))
    if disc.spec.n_xi > 1:
        prof = np.repeat(prof[:, np.newaxis], disc.spec.n_xi, axis=1)
    return prof


def _field(disc: Discretization, values: np.ndarray) -> CylinderField:
    return CylinderField(d=disc.d, s_grid=disc.s, xi_grid=disc.xi, values=values)


def _check_boundary_decay(values: np.ndarray) -> bool:
    v2 = values if values.ndim == 2 else values[:, np.newaxis]
    peak = np.max(np.abs(v2))
    edge = max(np.max(np.abs(v2[0])), np.max(np.abs(v2[-1])))
    return bool(edge <= 1e-6 * peak)


def _run_ckn(disc: Discretization, params: CknParams, v0: np.ndarray) -> MinimizeResult:
    if params.boundary:
        raise DomainError("minimizer requires 2 < p < 2* strictly")
    spec = disc.spec
    fg = _ckn_value_grad(disc, params)
    res_fn = _ckn_residual(disc, params)

    def project(v):
        return v / disc.norm_p(v, params.p)

    def tangent(v, g):
        w = disc.W if v.ndim == 2 else disc.W[:, 0]
        n = w * np.abs(v) ** (params.p - 2.0) * v
        return g - float(np.sum(g * n) / np.sum(n * n)) * n

    v, f, residual, it = _bb_minimize(
        v0, fg, project, tangent, spec.max_iter, spec.tol, res_fn, spec.residual_tol
    )
    converged = residual < spec.residual_tol
    if not converged and it >= spec.max_iter:
        raise ConvergenceError(
            f"no convergence in {spec.max_iter} iterations", last_residual=residual
        )
    return MinimizeResult(
        constant_estimate=1.0 / f,
        field=_field(disc, v),
        el_residual=residual,
        iterations=it,
        converged=converged,
        energy=f,
        history={"boundary_decay_ok": _check_boundary_decay(v)},
    )


def minimize_radial_ckn(
    params: CknParams, grid_spec: GridSpec | None = None
) -> MinimizeResult:
    """Minimize the interpolation quotient over s-only fields."""
    spec = grid_spec or GridSpec()
    if params.boundary:
        raise DomainError("minimizer requires 2 < p < 2* strictly")
    if spec.n_xi != 1:
        spec = GridSpec(spec.L, spec.n_s, 1, spec.tol, spec.max_iter, spec.residual_tol)
    disc = Discretization(params.d, spec)
    return _run_ckn(disc, params, _sech_profile(disc, params))


def minimize_ckn(
    params: CknParams,
    grid_spec: GridSpec,
    init: np.ndarray | None = None,
) -> MinimizeResult:
    """Full (s, angle) minimization; the search space contains the radial one."""
    if grid_spec.n_xi <= 1:
        raise DomainError("2D minimization requires n_xi > 1")
    if params.boundary:
        raise DomainError("minimizer requires 2 < p < 2* strictly")
    disc = Discretization(params.d, grid_spec)
    if init is None:
        init = _sech_profile(disc, params)
        xi = disc.xi
        init = init * (1.0 + 0.3 * np.cos(xi)[np.newaxis, :])
    return _run_ckn(disc, params, init)


def minimize_wlh(params: WlhParams, grid_spec: GridSpec | None = None) -> MinimizeResult:
    """Minimize the entropy quotient with unit L2 constraint (Gaussian start)."""
    spec = grid_spec or GridSpec()
    if params.gamma <= params.d / 4.0:
        raise DomainError("minimizer requires gamma > d/4 strictly")
    disc = Discretization(params.d, spec)
    w0 = np.exp(-disc.s**2 / 4.0)
    if spec.n_xi > 1:
        w0 = np.repeat(w0[:, np.newaxis], spec.n_xi, axis=1)
        w0 = w0 * (1.0 + 0.3 * np.cos(disc.xi)[np.newaxis, :])
    fg = _wlh_value_grad(disc, params)
    res_fn = _wlh_residual(disc, params)

    def project(w):
        return w / math.sqrt(disc.norm_sq(w))

    def tangent(x, g):
        ww = disc.W if x.ndim == 2 else disc.W[:, 0]
        n = ww * x
        return g - float(np.sum(g * n) / np.sum(n * n)) * n

    w, f, residual, it = _bb_minimize(
        w0, fg, project, tangent, spec.max_iter, spec.tol, res_fn, spec.residual_tol
    )
    converged = residual < spec.residual_tol
    if not converged and it >= spec.max_iter:
        raise ConvergenceError(
            f"no convergence in {spec.max_iter} iterations", last_residual=residual
        )
    return MinimizeResult(
        constant_estimate=1.0 / f,
        field=_field(disc, w),
        el_residual=residual,
        iterations=it,
        converged=converged,
        energy=f,
        history={"boundary_decay_ok": _check_boundary_decay(w)},
    )


@dataclass(frozen=True)
class SymmetryBreakingReport:
    broken: bool
    relative_gap: float
    anisotropy: float
    radial_energy: float
    full_energy: float


def detect_symmetry_breaking(
    params: CknParams, grid_spec: GridSpec, threshold: float = 1e-3
) -> SymmetryBreakingReport:
    """Compare the radial and unrestricted minima; a strict gap means breaking."""
    radial = minimize_radial_ckn(params, grid_spec)
    disc = Discretization(params.d, grid_spec)
    init = np.repeat(radial.field.values[:, np.newaxis], grid_spec.n_xi, axis=1)
    init = init * (1.0 + 0.3 * np.cos(disc.xi)[np.newaxis, :])
    full = minimize_ckn(params, grid_spec, init=init)
    gap = (radial.energy - full.energy) / radial.energy
    v = full.field.values
    mean = (v @ disc.w_xi)[:, np.newaxis] / np.sum(disc.w_xi)
    aniso = math.sqrt(disc.norm_sq(v - mean)) / math.sqrt(disc.norm_sq(v))
    return SymmetryBreakingReport(
        broken=bool(gap > threshold),
        relative_gap=float(gap),
        anisotropy=float(aniso),
        radial_energy=radial.energy,
        full_energy=full.energy,
    )


def spreading_sequence_demo(
    theta: float, a: float, d: int, n: int, grid_spec: GridSpec | None = None
) -> float:
    """Energy of the n-th spreading bump at p = 2.

    The bump v(s) = cos^2(pi s / 2) on [-1, 1] is stretched to width n with
    L2-preserving scaling n^(-1/2) v(s/n); the energy decreases toward
    lambda^theta, the exact (never attained) p = 2 constant.
    """
    if n < 1:
        raise DomainError(f"require n >= 1, got {n}")
    spec = grid_spec or GridSpec()
    if n * 1.0 > spec.L:
        raise GridOverflowError(
            f"bump support [-{n}, {n}] exceeds the grid [-{spec.L}, {spec.L}]"
        )
    params = make_ckn_params(d, a, 2.0, theta)
    disc = Discretization(d, GridSpec(spec.L, spec.n_s, 1, spec.tol, spec.max_iter))
    arg = disc.s / n
    v = np.where(np.abs(arg) < 1.0, np.cos(math.pi * arg / 2.0) ** 2, 0.0) / math.sqrt(n)
    return energy_ckn(disc, v, params)


# -- export -------------------------------------------------------------------


def field_to_csv(fld: CylinderField, path: str) -> None:
    """Write the field as CSV with columns s, xi, value (xi empty for radial)."""
    import csv as _csv

    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["s", "xi", "value"])
        v2 = fld.values if fld.values.ndim == 2 else fld.values[:, np.newaxis]
        xis = fld.xi_grid if fld.xi_grid is not None else [0.0]
        for i, s in enumerate(fld.s_grid):
            for j, xi in enumerate(xis):
                writer.writerow(
                    [format(s, ".17g"), format(xi, ".17g"), format(v2[i, j], ".17g")]
                )


def run_record(params: dict, spec: GridSpec, result: MinimizeResult) -> str:
    """Serialize a minimization run as JSON (params, grid, diagnostics)."""
    record = {
        "params": params,
        "grid": {
            "L": spec.L,
            "n_s": spec.n_s,
            "n_xi": spec.n_xi,
            "tol": spec.tol,
            "max_iter": spec.max_iter,
        },
        "iterations": result.iterations,
        "energy": result.energy,
        "constant_estimate": result.constant_estimate,
        "el_residual": result.el_residual,
        "converged": result.converged,
    }
    return json.dumps(record, indent=2, sort_keys=True)
