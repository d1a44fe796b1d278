"""Pydantic schemas for options and reports.

- options: reasoning options, command-line run configuration, generator profiles
- reports: JSON report models emitted by the command-line front end

Barrel exports for clean imports:
    from dln.schemas import ReasoningOptions, QueryReport, ReasonerStats
"""

from __future__ import annotations

from dln.schemas.options import KBProfile, ReasoningOptions, RunConfig
from dln.schemas.reports import (
    CounterexampleReport,
    Decision,
    ExplainReport,
    OverriddenEntry,
    PrototypeSummary,
    QueryReport,
    ReasonerStats,
    SweepReport,
)

__all__ = [
    "KBProfile",
    "ReasoningOptions",
    "RunConfig",
    "CounterexampleReport",
    "Decision",
    "ExplainReport",
    "OverriddenEntry",
    "PrototypeSummary",
    "QueryReport",
    "ReasonerStats",
    "SweepReport",
]
