"""Pydantic models for redmod."""

from app.models.ring import ElementLiteral, RingComponentSpec, RingSpec
from app.models.module import (
    CheckRequest,
    GammaRequest,
    GammaResponse,
    ModuleSpec,
    MultSetSpec,
    SearchRequest,
)
from app.models.report import (
    AuditReport,
    AuditStatus,
    CounterexampleWitness,
    Expectation,
    Instance,
    InstanceSpec,
    ReducednessFlags,
    ReducednessReport,
    RegularityCertificate,
    RegularityPair,
    RunConfig,
    RunReport,
    SummaryCounts,
)

__all__ = [
    # Ring models
    "ElementLiteral",
    "RingComponentSpec",
    "RingSpec",
    # Module and request models
    "CheckRequest",
    "GammaRequest",
    "GammaResponse",
    "ModuleSpec",
    "MultSetSpec",
    "SearchRequest",
    # Report models
    "AuditReport",
    "AuditStatus",
    "CounterexampleWitness",
    "Expectation",
    "Instance",
    "InstanceSpec",
    "ReducednessFlags",
    "ReducednessReport",
    "RegularityCertificate",
    "RegularityPair",
    "RunConfig",
    "RunReport",
    "SummaryCounts",
]
