"""Request and response models of the HTTP service."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from ..fv import FLUX_KINDS, SCHEMES


class Ratios(BaseModel):
    pe_ratio: float
    te_ratio: float
    rhoe_ratio: float


class JumpRequest(BaseModel):
    mach: float = Field(gt=0)
    gamma: float = Field(5.0 / 3.0, gt=1)


class JumpResponse(BaseModel):
    mach: float
    gamma: float
    decoupled: Optional[Ratios] = None
    decoupled_error: Optional[str] = None
    entropy: Ratios
    source: Ratios


class WaveSampleRequest(BaseModel):
    case: str = "caseHD"
    t: float = 0.0
    x: Optional[list[float]] = None
    points: int = Field(200, ge=2, le=200000)


class WaveSampleResponse(BaseModel):
    case: str
    t: float
    shock_position: float
    csv: str


class SchemeOptions(BaseModel):
    scheme: str = "A"
    flux: str = "godunov-upwind"
    courant: float = Field(0.2, gt=0, le=1)
    fourier_constant: float = Field(1.25, gt=0)
    correction_cutoff: int = Field(1, ge=0)
    corrections: bool = True
    wave_at_shock: bool = True
    clamp_fourier: bool = True

    @field_validator("scheme")
    @classmethod
    def _scheme(cls, v):
        if v not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        return v

    @field_validator("flux")
    @classmethod
    def _flux(cls, v):
        if v not in FLUX_KINDS:
            raise ValueError(f"flux must be one of {sorted(FLUX_KINDS)}")
        return v


class RunRequest(SchemeOptions):
    case: str = "caseHD"
    case_config: Optional[dict] = None
    n_cells: Optional[int] = Field(None, ge=3)
    t_final: Optional[float] = Field(None, gt=0)
    output_times: list[float] = []


class RunResponse(BaseModel):
    metadata: dict
    csv: dict[str, str]


class DSweepRequest(BaseModel):
    variants: list[Literal["standard", "compat", "corrected"]] = ["standard"]
    points: int = Field(9, ge=2, le=200)
    d_min: float = Field(1e-3, gt=0)
    d_max: float = Field(1e-1, gt=0)
    n_cells: int = Field(2000, ge=10)


class SweepResponse(BaseModel):
    rows: list[dict]
    csv: str
    slopes: dict = {}


class CourantSweepRequest(BaseModel):
    case: str = "solar5000"
    courants: list[float] = [0.05, 0.2, 0.3, 0.4]
    n_cells: Optional[int] = Field(None, ge=3)


class CoupledSweepRequest(BaseModel):
    case: str = "caseHD"
    mach_min: float = Field(1.01, ge=1)
    mach_max: float = Field(3.0, ge=1)
    points: int = Field(20, ge=1, le=500)
    tolerance: float = Field(1e-10, gt=0)


class VerifyRequest(BaseModel):
    criteria: Optional[list[int]] = None


class CheckOut(BaseModel):
    number: int
    title: str
    passed: bool
    unexpected_failures: list[str]
    checks: dict[str, bool]
    values: dict
    seconds: float
    line: str


class VerifyResponse(BaseModel):
    passed: bool
    only_known_failures: bool
    results: list[CheckOut]


class CaseOut(BaseModel):
    name: str
    config: dict
    nodes_per_ld: float
    notes: list[str]
