from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Linear algebra tolerances
    tol_sym: float = Field(1e-12)
    tol_degenerate_eig: float = Field(1e-12)

    # Reduction / equilibrium tolerances
    tol_angle_equal: float = Field(1e-12)
    tol_cert: float = Field(1e-9)
    tol_multiplier: float = Field(1e-12)
    tol_cmp: float = Field(1e-9)
    tol_eigvec: float = Field(1e-9)
    tol_delta: float = Field(1e-12)

    # Oracle settings
    grid_resolution: int = Field(3600, ge=8)
    landscape_resolution: int = Field(90, ge=8)
    epsilon_factor: float = Field(10.0, gt=0)
    regret_factor: float = Field(1.0, gt=0)
    oracle_workers: int = Field(4, ge=1)
    oracle_block_rows: int = Field(256, ge=1)

    log_level: str = Field('WARNING')

    class Config:
        env_prefix = 'QGAME_'
        env_file = '.env'


@lru_cache
def get_settings() -> Settings:
    return Settings()
