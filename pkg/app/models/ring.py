"""Ring description models for redmod."""

from pydantic import BaseModel, Field

# An element literal: a bare integer (plain residue rings) or one
# coefficient list per component, constant term first.
ElementLiteral = int | list[int | list[int]]


class RingComponentSpec(BaseModel):
    """One factor Z_n[x]/(f) of a product ring."""
    modulus: int
    monic_poly: list[int] = Field(default_factory=lambda: [0, 1], min_length=1)

    model_config = {"extra": "forbid"}


class RingSpec(BaseModel):
    """A finite commutative ring as a product of monic quotients of Z_n[x]."""
    components: list[RingComponentSpec] = Field(..., min_length=1)

    model_config = {"extra": "forbid"}

    @classmethod
    def cyclic(cls, n: int) -> "RingSpec":
        """Spec of the plain residue ring Z_n."""
        return cls(components=[RingComponentSpec(modulus=n)])
