import os
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings
from sympy import isprime


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name, "")
    return int(value) if value.strip() else None


class Settings(BaseSettings):
    """Atlas settings"""

    # Ground field (0 selects rational arithmetic for cross-checks)
    FIELD_CHAR: int = int(os.getenv("FIELD_CHAR", "32003"))

    # Randomized constructions
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "20240601"))
    RESEED_ATTEMPTS: int = int(os.getenv("RESEED_ATTEMPTS", "8"))
    EXPERIMENT_TRIALS: int = int(os.getenv("EXPERIMENT_TRIALS", "100"))

    # Degree windows and certificates
    WINDOW: Optional[int] = _optional_int("WINDOW")
    WINDOW_MARGIN: int = int(os.getenv("WINDOW_MARGIN", "8"))
    STABILIZATION_DEGREES: int = int(os.getenv("STABILIZATION_DEGREES", "3"))
    DUAL_DEGREE_SLACK: int = int(os.getenv("DUAL_DEGREE_SLACK", "24"))

    # Application Settings
    SCENARIO_WORKERS: int = int(os.getenv("SCENARIO_WORKERS", "1"))
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    REPORT_DIR: str = os.getenv("REPORT_DIR", "reports")

    @field_validator("FIELD_CHAR")
    @classmethod
    def _check_characteristic(cls, value: int) -> int:
        if value == 0:
            return value
        if not isprime(value):
            raise ValueError(f"FIELD_CHAR must be prime or 0, got {value}")
        if value >= 2 ** 31:
            raise ValueError(f"FIELD_CHAR must be below 2^31, got {value}")
        return value

    @field_validator("RESEED_ATTEMPTS", "STABILIZATION_DEGREES", "SCENARIO_WORKERS")
    @classmethod
    def _check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("value must be at least 1")
        return value

    class Config:
        env_file = ".env"
        extra = "ignore"  # Ignore extra fields from .env


settings = Settings()
