import logging
from functools import lru_cache
from typing import Tuple

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Tolerances and numeric defaults, overridable through HESSFIELD_* variables."""

    model_config = SettingsConfigDict(env_prefix="HESSFIELD_", env_file=".env", extra="ignore")

    threads: int = Field(default=1, ge=1)
    log_level: str = "WARNING"
    progress: bool = False

    # winding quadrature
    index_tolerance: float = 1e-6
    index_initial_samples: int = 64
    index_max_samples: int = 2 ** 16
    degenerate_tolerance: float = 1e-12

    # singularity location
    scan_resolution: int = 256
    cluster_radius: float = 1e-6
    snap_denominator: int = 1024

    # normal map
    newton_max_iterations: int = 30
    seed_grid: Tuple[int, int] = (256, 33)
    injectivity_grid: Tuple[int, int] = (512, 33)
    arc_length_table: int = 512
    curvature_target: float = 0.5
    conditioning_floor: float = 1e-6

    # overdetermined checks
    boundary_samples: int = 256
    boundary_residual_tolerance: float = 1e-8
    circle_fit_tolerance: float = 1e-8
    tangency_tolerance: float = 1e-8
    pde_residual_tolerance: float = 1e-6
    bump_margin: float = 1e-3

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value!r}")
        return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
