import math
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

HALF_PI = math.pi / 2


class GridOverride(BaseModel):
    resolution: Optional[int] = Field(None, ge=8)
    epsilon: Optional[float] = Field(None, ge=0, allow_inf_nan=False)

    class Config:
        extra = 'forbid'


class GameSpecFile(BaseModel):
    """Input game: four payoff coefficients, optional angles in radians, optional grid."""
    c: List[float]
    theta: Optional[float] = Field(None, allow_inf_nan=False)
    tau: Optional[float] = Field(None, allow_inf_nan=False)
    grid: Optional[GridOverride] = None

    class Config:
        extra = 'forbid'

    @field_validator('c')
    @classmethod
    def four_nonnegative(cls, values: List[float]) -> List[float]:
        if len(values) != 4:
            raise ValueError(f"expected 4 coefficients, got {len(values)}")
        for value in values:
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"coefficients must be finite and nonnegative, got {value}")
        return values

    @field_validator('theta', 'tau')
    @classmethod
    def radians_in_open_interval(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.0 < value < HALF_PI:
            raise ValueError(f"angle {value} must lie in (0, pi/2) radians")
        return value

    @model_validator(mode='after')
    def angles_come_in_pairs(self) -> "GameSpecFile":
        if (self.theta is None) != (self.tau is None):
            raise ValueError("theta and tau must be given together")
        return self


class DerivedQuantities(BaseModel):
    omega: List[float]
    n: float
    m: float
    delta: float
    trC: float
    theta_star: Optional[float] = None
    cos_two_theta: Optional[float] = None
    z: Optional[List[float]] = None
    alpha_eig: Optional[float] = None
    s_value: Optional[float] = None
    z_norm_cubed: Optional[float] = None


class CertificateReport(BaseModel):
    x: List[float]
    y: List[float]
    lam: float
    mu: float
    residual_x: float
    residual_y: float
    g: float
    H: float
    eigenequilibrium: bool


class ClusterReport(BaseModel):
    i: int
    j: int
    phi_x: float
    phi_y: float
    g: float
    size: int
    regret: float
    criterion_passes: bool


class OracleSummary(BaseModel):
    resolution: int
    epsilon: float
    theta: float
    tau: float
    raw_hits: int
    clusters: List[ClusterReport]
    discarded_clusters: int = 0
    certificates_verified: List[bool] = []
    agreement: Optional[bool] = None


class AnalysisReport(BaseModel):
    tool: str = 'qgame'
    version: str
    input: GameSpecFile
    derived: DerivedQuantities
    classification: str
    certificates: List[CertificateReport] = []
    oracle: Optional[OracleSummary] = None
    elapsed_seconds: float = 0.0
