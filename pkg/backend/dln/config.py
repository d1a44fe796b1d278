from __future__ import annotations

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from dln.constants import (
    DEFAULT_NODE_BUDGET,
    LOG_FORMAT_JSON,
    OUTPUT_FORMATS,
    OUTPUT_TEXT,
    PRIORITY_MODES,
    VALID_LOG_FORMATS,
    VALID_LOG_LEVELS,
)


class Settings(BaseSettings):
    """Reasoner configuration."""

    model_config = SettingsConfigDict(
        env_prefix="DLN_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Monitoring
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = LOG_FORMAT_JSON

    # Classical engine
    NODE_BUDGET: int = DEFAULT_NODE_BUDGET  # max completion-graph nodes live on a tableau branch
    MODEL_SEARCH_MAX_DOMAIN: int = 5  # largest domain the bounded model search tries, at most 5

    # Defeasible engine
    # - "specificity": a DI outranks another when its premise is strictly more specific under S
    # - "rank": DIs carry explicit ranks, lower rank = higher priority
    PRIORITY_MODE: str = "specificity"
    MAX_WORKERS: int = 1  # >1 runs independent consistency checks and query batches on a thread pool

    # Output
    OUTPUT_FORMAT: str = OUTPUT_TEXT

    # Postulate sweeps
    SWEEP_MAX_INSTANCES: int = 40

    @field_validator("LOG_LEVEL")
    @classmethod
    def _validate_log_level(cls, value: str) -> str:
        normalized = (value or "").strip().upper()
        if normalized not in VALID_LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL {value!r} is not a logging level name")
        return normalized

    @field_validator("LOG_FORMAT")
    @classmethod
    def _validate_log_format(cls, value: str) -> str:
        normalized = (value or "").strip().lower()
        if normalized not in VALID_LOG_FORMATS:
            raise ValueError(f"LOG_FORMAT must be one of: {', '.join(sorted(VALID_LOG_FORMATS))}")
        return normalized

    @field_validator("PRIORITY_MODE")
    @classmethod
    def _validate_priority_mode(cls, value: str) -> str:
        normalized = (value or "").strip().lower()
        if normalized not in PRIORITY_MODES:
            raise ValueError(f"PRIORITY_MODE must be one of: {', '.join(sorted(PRIORITY_MODES))}")
        return normalized

    @field_validator("OUTPUT_FORMAT")
    @classmethod
    def _validate_output_format(cls, value: str) -> str:
        normalized = (value or "").strip().lower()
        if normalized not in OUTPUT_FORMATS:
            raise ValueError(f"OUTPUT_FORMAT must be one of: {', '.join(sorted(OUTPUT_FORMATS))}")
        return normalized

    @field_validator("NODE_BUDGET", "MAX_WORKERS", "SWEEP_MAX_INSTANCES")
    @classmethod
    def _validate_positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("Budgets and worker counts must be positive integers")
        return value

    @field_validator("MODEL_SEARCH_MAX_DOMAIN")
    @classmethod
    def _validate_domain_bound(cls, value: int) -> int:
        if not 1 <= value <= 5:
            raise ValueError("MODEL_SEARCH_MAX_DOMAIN must be between 1 and 5")
        return value


def get_settings() -> Settings:
    return Settings()


settings = get_settings()
