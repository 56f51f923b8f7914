"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class MetricIn(BaseModel):
    n: int
    A_tilde: list[list[float]]
    rho: float = 0.0


class LatticeIn(BaseModel):
    n: int
    r: list[int]


class PointIn(BaseModel):
    x: list[float]
    y: list[float]
    z: float


class CovectorIn(BaseModel):
    p_x: list[float]
    p_y: list[float]
    p_z: float


class OptionsIn(BaseModel):
    brackets: int = 64
    root_tol: float = 1e-10
    zero_tol: float = 1e-9
    force_shooting: bool = False


class CanonicalizeRequest(BaseModel):
    metric: MetricIn


class CanonicalizeResponse(BaseModel):
    n: int
    d: list[float]
    rho: float
    R_used: list[list[float]]
    A_tilde_canonical: list[list[float]]


class FingerprintResponse(BaseModel):
    d: list[float]
    delta: float
    abs_det: float
    rho: float


class GeodesicRequest(BaseModel):
    metric: MetricIn
    covector: CovectorIn
    t_grid: list[float]


class GeodesicSampleOut(BaseModel):
    t: float
    x: list[float]
    y: list[float]
    z: float
    speed: float


class GeodesicResponse(BaseModel):
    samples: list[GeodesicSampleOut]


class DistanceRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    metric: MetricIn
    lattice: LatticeIn | None = None
    from_point: PointIn = Field(alias="from")
    to_point: PointIn = Field(alias="to")
    group_only: bool = False
    options: OptionsIn | None = None


class DistanceResponse(BaseModel):
    value: float
    method: str
    witness_covector: CovectorIn | None
    witness_time: float | None
    best_effort: bool
    representative: PointIn | None


class VolumeRequest(BaseModel):
    metric: MetricIn
    lattice: LatticeIn
    kind: Literal["riemannian", "popp", "minimal-popp", "all"] = "all"


class VolumeEntryOut(BaseModel):
    kind: str
    coeff: float
    total_measure: float


class VolumeResponse(BaseModel):
    results: list[VolumeEntryOut]


class SystoleRequest(BaseModel):
    lattice: LatticeIn
    metric: MetricIn
    constant: str | float = "default"
    classify_3d: bool = False


class ClassificationOut(BaseModel):
    r: int
    case: str
    threshold: float
    constant_case1: float
    constant_case2: float
    constant: float
    ratio: float
    equality: bool
    s1: float
    s2: float
    systole: float
    measure: float


class SystoleResponse(BaseModel):
    s1: float
    s1_witness: list[int]
    s2: float
    systole: float
    bound_rhs: float
    constant_used: float
    torus_constant_used: float
    holds: bool
    equality_gap: float
    measure: float
    classification: ClassificationOut | None = None


class CollapseEntryIn(BaseModel):
    lattice: LatticeIn
    metric: MetricIn
    k: int = 0


class CollapseRequest(BaseModel):
    entries: list[CollapseEntryIn]
    diameter_bound: float
    options: OptionsIn | None = None


class LimitTorusOut(BaseModel):
    gram: list[list[float]]
    dim: int


class CollapseResponse(BaseModel):
    measures: list[float]
    fiber_diams: list[float]
    diam_bound_used: float
    verdict: str
    dichotomy_case: list[str]
    limit_torus: LimitTorusOut
    successive_minima: list[list[float]]


class SelftestRequest(BaseModel):
    seed: int = 42
    checks: list[str] | None = None


class SelftestResponse(BaseModel):
    seed: int
    ok: bool
    failures: list[str]
    checks: list[dict]


class HealthResponse(BaseModel):
    status: str
    version: str
