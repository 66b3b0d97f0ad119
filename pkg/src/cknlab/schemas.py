"""Pydantic request and response models of the HTTP service.

These mirror the library's dataclasses; conversion helpers keep the core
modules free of any pydantic dependency.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from . import cylinder, regions

ConstantKindName = Literal[
    "ckn_radial", "ckn_radial_base", "wlh_radial", "gross_ls", "p2", "gn", "thresholds"
]


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str


class ErrorBody(BaseModel):
    tag: str
    message: str


class ConstantsRequest(BaseModel):
    kind: ConstantKindName
    d: int
    a: float | None = None
    p: float | None = None
    theta: float | None = None
    gamma: float | None = None


class ThresholdsBody(BaseModel):
    theta_sb: float
    a_bar_sb: float
    wlh_gamma_sb: float
    a0_star: float | None
    a_star: float | None
    lambda_star: float | None


class ConstantsResponse(BaseModel):
    kind: ConstantKindName
    value: float | None = None
    no_extremal: bool = False
    thresholds: ThresholdsBody | None = None


class GroundStateRequest(BaseModel):
    p: float
    d: int
    tol: float = 1e-12


class MomentsBody(BaseModel):
    x0: float
    y0: float
    z0: float
    x2: float
    y2: float
    z2: float


class GroundStateResponse(BaseModel):
    p: float
    d: int
    u0: float
    r_max: float
    tail_rate: float
    gn_constant: float
    moments: MomentsBody
    identity_residuals: dict[str, float]
    r_grid: list[float]
    u_values: list[float]


class GridSpecModel(BaseModel):
    L: float = 20.0
    n_s: int = 801
    n_xi: int = 65
    tol: float = 1e-8
    max_iter: int = 20000
    residual_tol: float = 1e-5

    def to_spec(self) -> cylinder.GridSpec:
        return cylinder.GridSpec(
            L=self.L,
            n_s=self.n_s,
            n_xi=self.n_xi,
            tol=self.tol,
            max_iter=self.max_iter,
            residual_tol=self.residual_tol,
        )


class MinimizeRequest(BaseModel):
    family: Literal["ckn", "ckn_radial", "wlh"]
    d: int
    a: float
    p: float | None = None
    theta: float | None = None
    gamma: float | None = None
    grid_spec: GridSpecModel = Field(default_factory=GridSpecModel)
    include_field: bool = False


class FieldBody(BaseModel):
    s_grid: list[float]
    xi_grid: list[float] | None
    values: list[list[float]]


class MinimizeResponse(BaseModel):
    constant_estimate: float
    energy: float
    el_residual: float
    iterations: int
    converged: bool
    field: FieldBody | None = None


class AxisRangeModel(BaseModel):
    min: float
    max: float
    count: int = Field(ge=1)


class SweepConfigModel(BaseModel):
    mode: Literal["ckn", "wlh"]
    d: int
    a: AxisRangeModel
    p: AxisRangeModel | None = None
    theta: AxisRangeModel | None = None
    gamma: AxisRangeModel | None = None
    grid_spec: GridSpecModel = Field(default_factory=GridSpecModel)
    run_minimizer: bool = False
    output_path: str | None = None

    def to_config(self) -> regions.SweepConfig:
        def axis(m):
            return regions.AxisRange(m.min, m.max, m.count) if m else None

        return regions.SweepConfig(
            mode=self.mode,
            d=self.d,
            a=axis(self.a),
            p=axis(self.p),
            theta=axis(self.theta),
            gamma=axis(self.gamma),
            grid_spec=self.grid_spec.to_spec(),
            run_minimizer=self.run_minimizer,
            output_path=self.output_path,
        )


class RegionsResponse(BaseModel):
    mode: str
    columns: list[str]
    rows: list[dict]


class VerifyRequest(BaseModel):
    suite: Literal["identities", "closed-forms", "minimizer", "all"]


class CheckBody(BaseModel):
    name: str
    passed: bool
    worst_residual: float
    detail: str


class VerifyResponse(BaseModel):
    suite: str
    results: list[CheckBody]
    all_passed: bool
