"""HTTP service exposing the toolkit.

Thin wrapper: every endpoint validates with the pydantic schemas, calls
straight into the library, and maps toolkit errors to structured 422
responses carrying the error tag.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from . import constants as cf
from . import cylinder, ground_state, regions, verify
from .errors import CknlabError
from .params import make_ckn_params, make_wlh_params
from .schemas import (
    ConstantsRequest,
    ConstantsResponse,
    FieldBody,
    GroundStateRequest,
    GroundStateResponse,
    HealthResponse,
    MinimizeRequest,
    MinimizeResponse,
    MomentsBody,
    RegionsResponse,
    SweepConfigModel,
    ThresholdsBody,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(title="cknlab", version=__version__)


@app.exception_handler(CknlabError)
async def _toolkit_error(request: Request, exc: CknlabError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"tag": exc.tag, "message": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(version=__version__)


@app.post("/constants", response_model=ConstantsResponse)
def constants(req: ConstantsRequest) -> ConstantsResponse:
    if req.kind == "ckn_radial":
        make_ckn_params(req.d, req.a, req.p, req.theta)
        value = cf.ckn_radial(req.theta, req.p, req.a, req.d).value
        return ConstantsResponse(kind=req.kind, value=value)
    if req.kind == "ckn_radial_base":
        value = cf.ckn_radial_base(req.theta, req.p, req.d).value
        return ConstantsResponse(kind=req.kind, value=value)
    if req.kind == "wlh_radial":
        value = cf.wlh_radial(req.gamma, req.a, req.d).value
        return ConstantsResponse(kind=req.kind, value=value)
    if req.kind == "gross_ls":
        return ConstantsResponse(kind=req.kind, value=cf.gross_ls(req.d).value)
    if req.kind == "p2":
        cv = cf.ckn_p2_constant(req.theta, req.a, req.d)
        return ConstantsResponse(kind=req.kind, value=cv.value, no_extremal=True)
    if req.kind == "gn":
        return ConstantsResponse(kind=req.kind, value=regions.cached_gn_constant(req.p, req.d))
    report = cf.threshold_report(req.a, req.p, req.d)
    return ConstantsResponse(
        kind="thresholds",
        thresholds=ThresholdsBody(
            theta_sb=report.theta_sb,
            a_bar_sb=report.a_bar_sb,
            wlh_gamma_sb=report.wlh_gamma_sb,
            a0_star=report.a0_star,
            a_star=report.a_star,
            lambda_star=report.lambda_star,
        ),
    )


@app.post("/ground-state", response_model=GroundStateResponse)
def ground_state_endpoint(req: GroundStateRequest) -> GroundStateResponse:
    profile = ground_state.solve_ground_state(req.p, req.d, req.tol)
    m = ground_state.moments(profile)
    return GroundStateResponse(
        p=req.p,
        d=req.d,
        u0=profile.u0,
        r_max=profile.r_max,
        tail_rate=profile.tail_rate,
        gn_constant=ground_state.gn_constant(req.p, req.d, profile).value,
        moments=MomentsBody(x0=m.x0, y0=m.y0, z0=m.z0, x2=m.x2, y2=m.y2, z2=m.z2),
        identity_residuals=ground_state.moment_identity_residuals(m, req.p, req.d),
        r_grid=[float(v) for v in profile.r_grid],
        u_values=[float(v) for v in profile.u_values],
    )


@app.post("/minimize", response_model=MinimizeResponse)
def minimize(req: MinimizeRequest) -> MinimizeResponse:
    spec = req.grid_spec.to_spec()
    if req.family == "wlh":
        params = make_wlh_params(req.d, req.a, req.gamma)
        result = cylinder.minimize_wlh(params, spec)
    else:
        params = make_ckn_params(req.d, req.a, req.p, req.theta)
        if req.family == "ckn_radial" or spec.n_xi == 1:
            result = cylinder.minimize_radial_ckn(params, spec)
        else:
            result = cylinder.minimize_ckn(params, spec)
    body = None
    if req.include_field:
        fld = result.field
        values = fld.values if fld.values.ndim == 2 else fld.values[:, None]
        body = FieldBody(
            s_grid=[float(v) for v in fld.s_grid],
            xi_grid=None if fld.xi_grid is None else [float(v) for v in fld.xi_grid],
            values=[[float(v) for v in row] for row in values],
        )
    return MinimizeResponse(
        constant_estimate=result.constant_estimate,
        energy=result.energy,
        el_residual=result.el_residual,
        iterations=result.iterations,
        converged=result.converged,
        field=body,
    )


def _jsonable(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


@app.post("/regions", response_model=RegionsResponse)
def regions_endpoint(req: SweepConfigModel) -> RegionsResponse:
    report = regions.run_sweep(req.to_config())
    rows = [
        {k: _jsonable(v) for k, v in row.values.items()} for row in report.rows
    ]
    return RegionsResponse(mode=report.mode, columns=report.columns, rows=rows)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    results = verify.run_suite(req.suite)
    return VerifyResponse(
        suite=req.suite,
        results=[
            {
                "name": r.name,
                "passed": r.passed,
                "worst_residual": r.worst_residual,
                "detail": r.detail,
            }
            for r in results
        ],
        all_passed=all(r.passed for r in results),
    )
