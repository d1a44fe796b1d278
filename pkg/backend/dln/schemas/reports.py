"""Pydantic schemas for machine-readable reports.

Field order is part of the contract: JSON output is produced with
``model_dump_json`` and must be byte-identical for identical inputs.
"""

from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ReasonerStats(BaseModel):
    """Counters of classical reasoning calls."""

    consistency_checks: int = Field(0, ge=0)
    subsumption_checks: int = Field(0, ge=0)

    def __sub__(self, other: "ReasonerStats") -> "ReasonerStats":
        return ReasonerStats(
            consistency_checks=self.consistency_checks - other.consistency_checks,
            subsumption_checks=self.subsumption_checks - other.subsumption_checks,
        )


class OverriddenEntry(BaseModel):
    di: str = Field(..., description="The overridden defeasible inclusion")
    normality: str = Field(..., description="The normality concept it was overridden in")
    reason: str = Field(..., description="The failed consistency check")


class QueryReport(BaseModel):
    """Answer to one defeasible query together with its reduction ledger."""

    query: str
    entailed: bool
    sigma: List[str] = Field(default_factory=list)
    linearization: List[str] = Field(default_factory=list)
    selected: List[str] = Field(default_factory=list)
    overridden: List[OverriddenEntry] = Field(default_factory=list)
    stats: ReasonerStats = Field(default_factory=ReasonerStats)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "query": "N(Human) <= some has_heart.LH",
                "entailed": True,
                "sigma": ["N(Human)"],
                "linearization": ["Human <~ some has_heart.LH"],
                "selected": ["N(Human) and Human <= some has_heart.LH"],
                "overridden": [],
                "stats": {"consistency_checks": 1, "subsumption_checks": 1},
            }
        }
    )


class Decision(BaseModel):
    di: str
    normality: str
    status: str = Field(..., description="kept or overridden")
    reason: Optional[str] = None


class ExplainReport(QueryReport):
    """QueryReport plus every (DI, normality concept) decision in construction order."""

    decisions: List[Decision] = Field(default_factory=list)


class PrototypeSummary(BaseModel):
    inconsistent: List[str] = Field(default_factory=list)
    consistent: List[str] = Field(default_factory=list)
    unsatisfiable: List[str] = Field(default_factory=list)
    conflicts: List[str] = Field(default_factory=list)
    stats: ReasonerStats = Field(default_factory=ReasonerStats)


class CounterexampleReport(BaseModel):
    kb: str = Field(..., description="The knowledge base, one axiom per line")
    rule: str
    premises: List[str] = Field(default_factory=list)
    conclusion: str
    failing_query: str


class SweepReport(BaseModel):
    rule: str
    kbs_checked: int = 0
    kbs_skipped: int = 0
    instances: int = 0
    instances_skipped: int = 0
    failures: int = 0
    counterexample: Optional[CounterexampleReport] = None
    stats: ReasonerStats = Field(default_factory=ReasonerStats)
