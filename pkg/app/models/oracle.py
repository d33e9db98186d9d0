from typing import List, NamedTuple

from pydantic import BaseModel, Field

from app.models.reduced import TorusPoint


class GridSpec(BaseModel):
    resolution: int = Field(..., ge=8)
    epsilon: float = Field(..., ge=0, allow_inf_nan=False)

    class Config:
        frozen = True


class OracleEquilibrium(NamedTuple):
    i: int
    j: int
    x: TorusPoint
    y: TorusPoint
    g_value: float
    deviation_gap_x: float
    deviation_gap_y: float
    # best deviation gain over the whole circle, both players summed
    regret: float = 0.0


class OracleCluster(NamedTuple):
    representative: OracleEquilibrium
    size: int


class OracleResult(NamedTuple):
    spec: GridSpec
    hits: List[OracleEquilibrium]
    clusters: List[OracleCluster]
    # components whose best member stays more than one grid step of payoff away from equilibrium
    discarded: List[OracleCluster]
