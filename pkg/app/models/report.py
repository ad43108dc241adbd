"""Report models for redmod audits and runs."""

from enum import Enum
from typing import Any
from pydantic import BaseModel, Field, model_validator

from app.models.module import ModuleSpec
from app.models.ring import RingSpec


class AuditStatus(str, Enum):
    """Outcome of checking one claim on one instance."""
    HOLDS = "holds"
    FAILS = "fails"
    HYPOTHESIS_NOT_MET = "hypothesis_not_met"
    SKIPPED = "skipped"


class Expectation(str, Enum):
    """What a claim is expected to do on the catalog."""
    HOLDS = "holds"
    DISPUTED = "disputed"
    CONCLUSION_ONLY = "conclusion_only"


class Instance(BaseModel):
    """The (ring, module, a, t) an audit ran on."""
    ring: str
    ring_spec: RingSpec | None = None
    module: str | None = None
    module_spec: ModuleSpec | None = None
    a: Any = None
    t: int | None = None

    model_config = {"extra": "forbid"}


class AuditReport(BaseModel):
    """One claim checked on one instance."""
    claim: str
    instance: Instance
    status: AuditStatus
    witness: dict[str, Any] | None = None
    detail: str = ""
    notes: list[str] = Field(default_factory=list)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def failures_carry_witness(self) -> "AuditReport":
        if self.status == AuditStatus.FAILS and not self.witness:
            raise ValueError(f"claim {self.claim}: a failing report needs a witness")
        return self


class ReducednessFlags(BaseModel):
    """The equivalent conditions for a^t-reducedness, each computed independently."""
    definitional: bool
    gln_zero: bool
    ann_stabilizes: bool
    hom_card_matches: bool
    hom_limit_matches: bool
    gamma_equals_ann_t: bool
    sequence_exact: bool

    def values(self) -> list[bool]:
        return list(self.model_dump().values())


class ReducednessReport(BaseModel):
    """All equivalent forms of a^t-reducedness on one instance."""
    instance: Instance
    conditions: ReducednessFlags
    consistent: bool
    stabilization_index: int
    witness: dict[str, Any] | None = None

    @model_validator(mode="after")
    def consistency_matches_flags(self) -> "ReducednessReport":
        if self.consistent != (len(set(self.conditions.values())) == 1):
            raise ValueError("consistent must equal agreement of all conditions")
        return self


class RegularityPair(BaseModel):
    a: Any
    b: Any


class RegularityCertificate(BaseModel):
    """t-regularity decision with one witness b per element (least in enumeration order)."""
    ring: str
    t: int
    regular: bool
    witness_map: list[RegularityPair] = Field(default_factory=list)
    azumaya_map: list[RegularityPair] = Field(default_factory=list)
    failing_a: Any = None


class SummaryCounts(BaseModel):
    holds: int = 0
    fails: int = 0
    hypothesis_not_met: int = 0
    skipped: int = 0


class InstanceSpec(BaseModel):
    """A single explicit instance for a run."""
    module: ModuleSpec
    a: Any = None
    t: int | None = None

    model_config = {"extra": "forbid"}


class RunConfig(BaseModel):
    """What a batch run audits."""
    claims: list[str] = Field(default_factory=list)
    t: list[int] = Field(default_factory=lambda: [1], min_length=1)
    min_n: int | None = Field(default=None, ge=2)
    max_n: int | None = Field(default=None, ge=2)
    max_order: int = Field(default=32, ge=1)
    rings: list[RingSpec] | None = None
    instance: InstanceSpec | None = None
    degree: int = Field(default=2, ge=0)
    workers: int | None = Field(default=None, ge=1)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def positive_t(self) -> "RunConfig":
        if any(t < 1 for t in self.t):
            raise ValueError("every t must be >= 1")
        return self


class RunReport(BaseModel):
    """The document a run produces."""
    tool_version: str
    configuration: dict[str, Any]
    reports: list[AuditReport] = Field(default_factory=list)
    summary: SummaryCounts = Field(default_factory=SummaryCounts)
    failed_expected: int = 0
    wall_time: float = 0.0

    @property
    def exit_code(self) -> int:
        return 1 if self.failed_expected else 0


class CounterexampleWitness(BaseModel):
    """A failing instance found by the counterexample search, re-verified."""
    claim: str
    ring: str
    ring_spec: RingSpec
    t: int
    witness: dict[str, Any]
    reverified: bool
