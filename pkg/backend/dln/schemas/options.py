"""Pydantic schemas for reasoning options, run configuration and generator profiles.

Usage:
    from dln.schemas.options import ReasoningOptions, RunConfig, KBProfile
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from dln.config import settings
from dln.constants import (
    MAX_PROFILE_CONCEPTS,
    MAX_PROFILE_DEPTH,
    MAX_PROFILE_DIS,
    MAX_PROFILE_ROLES,
    OUTPUT_FORMATS,
    PRIORITY_MODES,
)


def _check_priority_mode(value: str) -> str:
    normalized = value.strip().lower()
    if normalized not in PRIORITY_MODES:
        raise ValueError(f"priority mode must be one of: {', '.join(sorted(PRIORITY_MODES))}")
    return normalized


class ReasoningOptions(BaseModel):
    """Options of one defeasible reasoning call."""

    model_config = ConfigDict(frozen=True)

    priority_mode: str = Field(
        default_factory=lambda: settings.PRIORITY_MODE,
        description="specificity or rank",
    )
    assume_nonempty_prototypes: bool = Field(
        False,
        description="Assert a witness for every classically consistent concept name before reducing",
    )
    max_workers: int = Field(
        default_factory=lambda: settings.MAX_WORKERS,
        ge=1,
        description="Thread pool width for the independent checks of one construction step",
    )

    @field_validator("priority_mode")
    @classmethod
    def validate_priority_mode(cls, v: str) -> str:
        return _check_priority_mode(v)


class RunConfig(BaseModel):
    """Configuration of one command-line invocation."""

    kb_path: Path = Field(..., description="Knowledge base file")
    priority_mode: str = Field(default_factory=lambda: settings.PRIORITY_MODE)
    nonempty_prototypes: bool = Field(False, description="--assume-nonempty-prototypes")
    output_format: str = Field(default_factory=lambda: settings.OUTPUT_FORMAT)
    node_budget: int = Field(default_factory=lambda: settings.NODE_BUDGET, ge=1)
    max_workers: int = Field(default_factory=lambda: settings.MAX_WORKERS, ge=1)
    unicode: bool = Field(False, description="Print DL glyphs in text output")

    @field_validator("priority_mode")
    @classmethod
    def validate_priority_mode(cls, v: str) -> str:
        return _check_priority_mode(v)

    @field_validator("output_format")
    @classmethod
    def validate_output_format(cls, v: str) -> str:
        normalized = v.strip().lower()
        if normalized not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of: {', '.join(sorted(OUTPUT_FORMATS))}")
        return normalized

    def reasoning_options(self) -> ReasoningOptions:
        return ReasoningOptions(
            priority_mode=self.priority_mode,
            assume_nonempty_prototypes=self.nonempty_prototypes,
            max_workers=self.max_workers,
        )


class KBProfile(BaseModel):
    """Size bounds of a randomly generated knowledge base."""

    model_config = ConfigDict(frozen=True)

    n_concepts: int = Field(3, ge=1, le=MAX_PROFILE_CONCEPTS, description="Concept names A, B, ...")
    n_roles: int = Field(1, ge=0, le=MAX_PROFILE_ROLES, description="Role names r, s")
    n_individuals: int = Field(2, ge=0, le=3)
    n_dis: int = Field(3, ge=0, le=MAX_PROFILE_DIS)
    n_strong: int = Field(2, ge=0, le=8, description="Strict inclusions")
    n_assertions: int = Field(1, ge=0, le=4)
    max_depth: int = Field(2, ge=0, le=MAX_PROFILE_DEPTH, description="Concept nesting depth")
    allow_normality: bool = Field(
        False,
        description="Let N(C) occur in strict axioms and DI conclusions",
    )
    max_instances: Optional[int] = Field(
        None,
        ge=1,
        description="Instances checked per KB in a sweep (defaults to DLN_SWEEP_MAX_INSTANCES)",
    )

    @property
    def instances_per_kb(self) -> int:
        return self.max_instances or settings.SWEEP_MAX_INSTANCES
