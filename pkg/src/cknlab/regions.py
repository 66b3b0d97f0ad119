"""Parameter-plane sweeps combining constants, thresholds and minimizer runs.

A sweep walks a rectangular grid in the (a, p, theta) or (a, gamma) plane,
evaluates every closed form at each point, optionally runs the cylinder
minimizer, and emits one row per point.  Invalid points are kept as rows
with a skip reason instead of aborting the sweep.

Rows carry both the numeric columns and the derived boolean flags; the
flags are recomputable from the numeric columns alone, which the CSV
round-trip tests rely on.
"""

from __future__ import annotations

import csv
import io
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import constants as cf
from . import cylinder, ground_state
from .errors import CknlabError, DomainError, ParameterError
from .params import make_ckn_params, make_wlh_params, theta_lower

WORKERS_ENV = "CKNLAB_WORKERS"

CSV_SCHEMA_LINE = "# cknlab-region-csv v1"

CKN_COLUMNS = [
    "d",
    "a",
    "p",
    "theta",
    "radial_constant",
    "gn_constant",
    "theta_sb_threshold",
    "a_bar_sb",
    "a0_star",
    "sb_predicted",
    "existence_guaranteed",
    "boundary_case",
    "minimizer_estimate",
    "broken",
    "skip_reason",
]

WLH_COLUMNS = [
    "d",
    "a",
    "gamma",
    "radial_constant",
    "ls_constant",
    "wlh_gamma_sb",
    "a_star",
    "sb_predicted",
    "existence_guaranteed",
    "boundary_case",
    "minimizer_estimate",
    "broken",
    "skip_reason",
]


@dataclass(frozen=True)
class AxisRange:
    """Inclusive linear range; count = 1 pins the axis at ``min``."""

    min: float
    max: float
    count: int

    def values(self) -> list[float]:
        if self.count < 1:
            raise DomainError(f"axis count must be >= 1, got {self.count}")
        if self.count == 1:
            return [self.min]
        step = (self.max - self.min) / (self.count - 1)
        return [self.min + i * step for i in range(self.count)]


@dataclass(frozen=True)
class SweepConfig:
    """Grid and solver settings of one sweep."""

    mode: str  # "ckn" or "wlh"
    d: int
    a: AxisRange
    p: AxisRange | None = None
    theta: AxisRange | None = None
    gamma: AxisRange | None = None
    grid_spec: cylinder.GridSpec = field(
        default_factory=lambda: cylinder.GridSpec(n_xi=65)
    )
    run_minimizer: bool = False
    output_path: str | None = None


def config_from_dict(raw: dict) -> SweepConfig:
    """Build a SweepConfig from parsed JSON, applying the documented defaults."""
    mode = raw.get("mode")
    if mode not in ("ckn", "wlh"):
        raise DomainError(f"mode must be 'ckn' or 'wlh', got {mode!r}")

    def axis(key):
        if key not in raw:
            return None
        r = raw[key]
        return AxisRange(float(r["min"]), float(r["max"]), int(r["count"]))

    g = raw.get("grid_spec", {})
    spec = cylinder.GridSpec(
        L=float(g.get("L", 20.0)),
        n_s=int(g.get("n_s", 801)),
        n_xi=int(g.get("n_xi", 65)),
        tol=float(g.get("tol", 1e-8)),
        max_iter=int(g.get("max_iter", 20000)),
        residual_tol=float(g.get("residual_tol", 1e-5)),
    )
    a = axis("a")
    if a is None:
        raise DomainError("sweep config requires an 'a' range")
    if mode == "ckn" and (axis("p") is None or axis("theta") is None):
        raise DomainError("ckn sweep requires 'p' and 'theta' ranges")
    if mode == "wlh" and axis("gamma") is None:
        raise DomainError("wlh sweep requires a 'gamma' range")
    return SweepConfig(
        mode=mode,
        d=int(raw["d"]),
        a=a,
        p=axis("p"),
        theta=axis("theta"),
        gamma=axis("gamma"),
        grid_spec=spec,
        run_minimizer=bool(raw.get("run_minimizer", False)),
        output_path=raw.get("output_path"),
    )


@dataclass
class RegionRow:
    """One sweep point; ``values`` maps column name to float, str or None."""

    values: dict


@dataclass
class RegionReport:
    mode: str
    columns: list
    rows: list


# -- memoized ground states ---------------------------------------------------

_gs_cache: dict = {}
_gs_lock = threading.Lock()


def cached_gn_constant(p: float, d: int, tol: float = 1e-12) -> float:
    """Ground-state Gagliardo-Nirenberg constant, shared across a sweep grid."""
    key = (p, d, tol)
    with _gs_lock:
        if key in _gs_cache:
            return _gs_cache[key]
    profile = ground_state.solve_ground_state(p, d, tol)
    value = ground_state.gn_constant(p, d, profile).value
    with _gs_lock:
        _gs_cache[key] = value
    return value


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


# -- flag derivation ----------------------------------------------------------


def ckn_flags(
    d: int,
    a: float,
    p: float,
    theta: float,
    gn_value: float | None,
    radial_value: float | None,
    confirmed_symmetric: bool | None = None,
) -> tuple[bool, str, bool]:
    """(sb_predicted, existence_guaranteed, boundary_case) for a CKN point.

    ``existence_guaranteed`` is a three-valued string: points at the
    scaling-critical theta with weight at or below the zero-slack threshold
    are 'indeterminate' unless a minimizer run certifies the comparison.
    """
    from .params import critical_exponent

    p_crit = critical_exponent(d)
    th_min = theta_lower(p, d)
    if p == 2.0:
        return False, "false", True
    sb = False
    a_bar = cf.a_bar_sb(p, d)
    theta_sb = cf.theta_sb_threshold(a, p, d)
    if a < a_bar:
        sb = th_min <= theta <= 1.0
    else:
        sb = th_min <= theta < theta_sb
    if p == p_crit:
        return sb, "indeterminate", True
    if theta > th_min:
        return sb, "true", False
    # theta == theta_min exactly (scaling-critical line)
    if d >= 3 and a > cf.a0_star(p, d):
        return sb, "true", False
    if (
        confirmed_symmetric
        and gn_value is not None
        and radial_value is not None
        and gn_value < radial_value * (1.0 - 1e-9)
    ):
        return sb, "true", False
    return sb, "indeterminate", False


def wlh_flags(d: int, a: float, gamma: float) -> tuple[bool, str, bool]:
    """(sb_predicted, existence_guaranteed, boundary_case) for a WLH point."""
    sb = a < -0.5 and gamma < cf.wlh_sb_threshold(a, d)
    boundary = gamma == d / 4.0
    if gamma > d / 4.0:
        return sb, "true", boundary
    if d >= 3 and a > cf.a_star(d):
        return sb, "true", boundary
    return sb, "indeterminate", boundary


# -- sweeps -------------------------------------------------------------------


def _skip_row(mode: str, point: dict, reason: str) -> RegionRow:
    cols = CKN_COLUMNS if mode == "ckn" else WLH_COLUMNS
    values = {c: None for c in cols}
    values.update(point)
    values["skip_reason"] = reason
    return RegionRow(values=values)


def _ckn_point(config: SweepConfig, a: float, p: float, theta: float) -> RegionRow:
    d = config.d
    point = {"d": d, "a": a, "p": p, "theta": theta}
    try:
        params = make_ckn_params(d, a, p, theta)
    except ParameterError as exc:
        return _skip_row("ckn", point, exc.tag)
    from .params import critical_exponent

    p_crit = critical_exponent(d)
    if p == 2.0:
        radial = cf.ckn_p2_constant(theta, a, d).value if 0.0 < theta < 1.0 else None
        gn_value = None
        theta_sb = None
    else:
        radial = cf.ckn_radial(theta, p, a, d).value
        gn_value = cached_gn_constant(p, d) if p < p_crit else None
        theta_sb = cf.theta_sb_threshold(a, p, d)
    a_bar = cf.a_bar_sb(p, d) if p > 2.0 else None
    a0 = cf.a0_star(p, d) if (d >= 3 and 2.0 < p < p_crit) else None

    estimate = None
    broken = None
    confirmed_symmetric = None
    if config.run_minimizer and not params.boundary:
        try:
            report = cylinder.detect_symmetry_breaking(params, config.grid_spec)
            broken = report.broken
            confirmed_symmetric = not report.broken
            estimate = 1.0 / report.full_energy
        except CknlabError as exc:
            return _skip_row("ckn", point, exc.tag)

    sb, existence, boundary = ckn_flags(
        d, a, p, theta, gn_value, radial, confirmed_symmetric
    )
    return RegionRow(
        values={
            "d": d,
            "a": a,
            "p": p,
            "theta": theta,
            "radial_constant": radial,
            "gn_constant": gn_value,
            "theta_sb_threshold": theta_sb,
            "a_bar_sb": a_bar,
            "a0_star": a0,
            "sb_predicted": sb,
            "existence_guaranteed": existence,
            "boundary_case": boundary,
            "minimizer_estimate": estimate,
            "broken": broken,
            "skip_reason": None,
        }
    )


def _wlh_point(config: SweepConfig, a: float, gamma: float) -> RegionRow:
    d = config.d
    point = {"d": d, "a": a, "gamma": gamma}
    try:
        params = make_wlh_params(d, a, gamma)
    except ParameterError as exc:
        return _skip_row("wlh", point, exc.tag)
    radial = cf.wlh_radial(gamma, a, d).value
    ls = cf.gross_ls(d).value
    gamma_sb = cf.wlh_sb_threshold(a, d)
    a_star = cf.a_star(d) if d >= 3 else None

    estimate = None
    broken = None
    if config.run_minimizer and gamma > d / 4.0:
        try:
            result = cylinder.minimize_wlh(params, config.grid_spec)
            estimate = result.constant_estimate
        except CknlabError as exc:
            return _skip_row("wlh", point, exc.tag)

    sb, existence, boundary = wlh_flags(d, a, gamma)
    return RegionRow(
        values={
            "d": d,
            "a": a,
            "gamma": gamma,
            "radial_constant": radial,
            "ls_constant": ls,
            "wlh_gamma_sb": gamma_sb,
            "a_star": a_star,
            "sb_predicted": sb,
            "existence_guaranteed": existence,
            "boundary_case": boundary,
            "minimizer_estimate": estimate,
            "broken": broken,
            "skip_reason": None,
        }
    )


def sweep_ckn(config: SweepConfig) -> RegionReport:
    """Evaluate every (a, p, theta) grid point; rows in deterministic grid order."""
    if config.mode != "ckn":
        raise DomainError(f"expected mode 'ckn', got {config.mode!r}")
    points = [
        (a, p, theta)
        for a in config.a.values()
        for p in config.p.values()
        for theta in config.theta.values()
    ]
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        rows = list(pool.map(lambda pt: _ckn_point(config, *pt), points))
    return RegionReport(mode="ckn", columns=CKN_COLUMNS, rows=rows)


def sweep_wlh(config: SweepConfig) -> RegionReport:
    """Evaluate every (a, gamma) grid point; rows in deterministic grid order."""
    if config.mode != "wlh":
        raise DomainError(f"expected mode 'wlh', got {config.mode!r}")
    points = [(a, g) for a in config.a.values() for g in config.gamma.values()]
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        rows = list(pool.map(lambda pt: _wlh_point(config, *pt), points))
    return RegionReport(mode="wlh", columns=WLH_COLUMNS, rows=rows)


def run_sweep(config: SweepConfig) -> RegionReport:
    return sweep_ckn(config) if config.mode == "ckn" else sweep_wlh(config)


# -- CSV ----------------------------------------------------------------------


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def report_to_csv(report: RegionReport) -> str:
    """Render the report as the versioned CSV format (deterministic bytes)."""
    buf = io.StringIO()
    buf.write(CSV_SCHEMA_LINE + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_format_cell(row.values.get(c)) for c in report.columns])
    return buf.getvalue()


def write_report(report: RegionReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(report_to_csv(report))


def read_report_csv(text: str) -> RegionReport:
    """Parse a region CSV back into a report (strings kept for flag columns)."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_SCHEMA_LINE:
        raise DomainError("missing or unknown region CSV schema line")
    reader = csv.reader(io.StringIO("\n".join(lines[1:])))
    header = next(reader)
    mode = "ckn" if "p" in header else "wlh"
    rows = []
    flag_cols = {"sb_predicted", "existence_guaranteed", "boundary_case", "skip_reason"}
    for record in reader:
        values = {}
        for col, cell in zip(header, record):
            if cell == "":
                values[col] = None
            elif col in flag_cols:
                values[col] = cell
            elif col == "broken":
                values[col] = cell == "true"
            elif col == "d":
                values[col] = int(cell)
            else:
                values[col] = float(cell)
        rows.append(RegionRow(values=values))
    return RegionReport(mode=mode, columns=header, rows=rows)
