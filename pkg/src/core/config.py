"""
Configuration management using Pydantic Settings.
All settings loaded from environment variables or .env file.
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    # Application
    lipmin_env: Literal["development", "production"] = Field(
        default="development", alias="LIPMIN_ENV"
    )
    log_level: str = Field(default="INFO", alias="LIPMIN_LOG_LEVEL")

    # Fallback master seed for every command that draws random numbers
    seed: int | None = Field(default=None, alias="LIPMIN_SEED")

    # Contact detection
    contact_rel_tol: float = Field(default=1e-9, alias="LIPMIN_CONTACT_REL_TOL")

    # Window handling, in multiples of the mean excursion length
    truncation_guard: float = Field(default=10.0, alias="LIPMIN_TRUNCATION_GUARD")
    boundary_buffer: float = Field(default=5.0, alias="LIPMIN_BOUNDARY_BUFFER")

    # Quadrature and tabulated CDFs
    quad_epsabs: float = Field(default=1e-9, alias="LIPMIN_QUAD_EPSABS")
    cdf_table_size: int = Field(default=4096, alias="LIPMIN_CDF_TABLE_SIZE")
    cdf_tail_mass: float = Field(default=1e-9, alias="LIPMIN_CDF_TAIL_MASS")

    # Samplers
    max_path_steps: int = Field(default=1_000_000_000, alias="LIPMIN_MAX_PATH_STEPS")
    staleness_factor: float = Field(default=10.0, alias="LIPMIN_STALENESS_FACTOR")
    horizon_cap: float = Field(default=1e4, alias="LIPMIN_HORIZON_CAP")
    straddle_pool_min: int = Field(default=1000, alias="LIPMIN_STRADDLE_POOL_MIN")

    # Verification
    p_threshold: float = Field(default=0.001, alias="LIPMIN_P_THRESHOLD")
    k_sigma: float = Field(default=3.0, alias="LIPMIN_K_SIGMA")
    harness_workers: int = Field(default=1, alias="LIPMIN_HARNESS_WORKERS")
    report_dir: str | None = Field(default=None, alias="LIPMIN_REPORT_DIR")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    @field_validator(
        "contact_rel_tol",
        "truncation_guard",
        "boundary_buffer",
        "quad_epsabs",
        "staleness_factor",
        "horizon_cap",
        "k_sigma",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Tolerances and guard factors must be strictly positive."""
        if v <= 0:
            raise ValueError("must be > 0")
        return v

    @field_validator("p_threshold", "cdf_tail_mass")
    @classmethod
    def validate_probability(cls, v: float) -> float:
        """Probabilities must lie strictly inside (0, 1)."""
        if not 0 < v < 1:
            raise ValueError("must lie in (0, 1)")
        return v

    @field_validator("cdf_table_size", "max_path_steps", "harness_workers", "straddle_pool_min")
    @classmethod
    def validate_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("report_dir")
    @classmethod
    def validate_report_dir(cls, v: str | None) -> str | None:
        """Ensure report directory is absolute."""
        if v is not None and not Path(v).is_absolute():
            raise ValueError("LIPMIN_REPORT_DIR must be an absolute path")
        return v

    @property
    def is_production(self) -> bool:
        """Check if running in production environment."""
        return self.lipmin_env == "production"


@lru_cache
def get_settings() -> Settings:
    """
    Get cached settings instance.
    Uses lru_cache to ensure settings are loaded only once.
    """
    return Settings()


# Export singleton instance
settings = get_settings()
