"""Module description models for redmod."""

from typing import Any
from pydantic import BaseModel, Field

from app.models.ring import ElementLiteral, RingSpec


class ModuleSpec(BaseModel):
    """R^rank modulo the submodule generated by the relation vectors."""
    ring: RingSpec
    rank: int = Field(default=1, ge=0)
    relations: list[list[ElementLiteral]] = Field(default_factory=list)

    model_config = {"extra": "forbid"}


class MultSetSpec(BaseModel):
    """Generators of a multiplicatively closed set."""
    generators: list[ElementLiteral] = Field(default_factory=list)

    model_config = {"extra": "forbid"}


class CheckRequest(BaseModel):
    """Run one claim on one ring or module."""
    spec: dict[str, Any]
    claim: str = Field(..., min_length=1)
    a: ElementLiteral | None = None
    t: int = Field(default=1, ge=1)
    degree: int = Field(default=2, ge=0)
    mult_set: MultSetSpec | None = None


class GammaRequest(BaseModel):
    """Compute Γ_a and a^tΓ_a of one module."""
    spec: dict[str, Any]
    a: ElementLiteral
    t: int = Field(default=1, ge=1)


class GammaResponse(BaseModel):
    module: str
    a: Any
    t: int
    gamma: list[Any]
    gln: list[Any]
    chain: list[list[Any]]
    stabilization_index: int
    at_reduced: bool


class SearchRequest(BaseModel):
    claim: str = Field(..., min_length=1)
    t: int = Field(default=1, ge=1)
    max_order: int = Field(default=16, ge=1)
