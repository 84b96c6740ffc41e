# htheorem/core/config.py
"""
Numerical tolerances and runtime settings with validation.
Every threshold used by the toolkit is read from here so a single
environment variable can tighten or loosen a whole run.
"""

import logging
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseSettings):
    """
    Toolkit settings loaded from environment variables (or a local .env).
    """

    # ===== TOLERANCES =====
    VALIDATION_TOL: float = Field(
        default=1e-10,
        description="Hermiticity, positivity and trace checks on density matrices",
    )
    EQUALITY_TOL: float = Field(
        default=1e-9,
        description="Default tolerance for 'approximately equal' verdicts",
    )
    UNITALITY_TOL: float = Field(
        default=1e-9,
        description="A channel is unital when its defect norm is below this",
    )
    UNITARITY_TOL: float = Field(
        default=1e-9,
        description="Frobenius tolerance on U†U - I for user-supplied unitaries",
    )
    KRAUS_PRUNE_TOL: float = Field(default=1e-12)
    ENV_EIGEN_CUTOFF: float = Field(default=1e-12)

    # ===== EIGENSOLVER =====
    JACOBI_MAX_SWEEPS: int = Field(default=64, ge=1)

    # ===== SWEEPS =====
    SWEEP_STATES_PER_CHANNEL: int = Field(default=20, ge=1)
    SWEEP_WORKERS: int = Field(default=1, ge=1)
    DEFAULT_SEED: int = Field(default=42, ge=0, lt=2**64)

    # ===== LOGGING / OUTPUT =====
    LOG_LEVEL: str = Field(default="WARNING")
    LOG_FILE: Optional[str] = None
    NO_COLOR: Optional[str] = None

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # ===== VALIDATORS =====

    @field_validator(
        "VALIDATION_TOL",
        "EQUALITY_TOL",
        "UNITALITY_TOL",
        "UNITARITY_TOL",
        "KRAUS_PRUNE_TOL",
        "ENV_EIGEN_CUTOFF",
    )
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("tolerances must be strictly positive")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {sorted(_LOG_LEVELS)}")
        return level

    @property
    def color_enabled(self) -> bool:
        """NO_COLOR convention: any non-empty value disables styling."""
        return not self.NO_COLOR


# Singleton instance
settings = Settings()


def validate_startup() -> list[str]:
    """
    Called by the CLI before dispatch. Returns (and logs) warnings about
    settings that are legal but unlikely to be what the user meant.
    """
    logger = logging.getLogger(__name__)
    warnings = []

    loose = {
        name: getattr(settings, name)
        for name in ("VALIDATION_TOL", "EQUALITY_TOL", "UNITALITY_TOL", "UNITARITY_TOL")
        if getattr(settings, name) > 1e-6
    }
    for name, value in loose.items():
        warnings.append(f"{name}={value:g} is looser than 1e-6; verdicts may hide real defects")

    if settings.UNITALITY_TOL < settings.KRAUS_PRUNE_TOL:
        warnings.append("UNITALITY_TOL is below KRAUS_PRUNE_TOL; pruning noise can flip verdicts")

    for warning in warnings:
        logger.warning(warning)
    return warnings
