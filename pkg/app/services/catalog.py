"""The default catalog of rings, module families and scalar grids."""

import logging
from dataclasses import dataclass
from typing import Iterator

from app.config import get_settings
from app.models.ring import RingSpec
from app.services.ideals import enumerate_ideals
from app.services.modules import PresentedModule, cyclic_quotient, free_module, regular_module
from app.services.ring_core import CommutativeRing, FiniteRing, classify, ring_make

logger = logging.getLogger(__name__)

EXTRA_RING_SPECS: tuple[RingSpec, ...] = (
    RingSpec.model_validate({"components": [{"modulus": 2, "monic_poly": [0, 0, 1]}]}),
    RingSpec.model_validate({"components": [{"modulus": 2, "monic_poly": [1, 1, 1]}]}),
    RingSpec.model_validate({"components": [{"modulus": 4, "monic_poly": [0, 0, 1]}]}),
    RingSpec.model_validate({"components": [{"modulus": 3, "monic_poly": [1, 0, 1]}]}),
    RingSpec.model_validate({"components": [{"modulus": 2}, {"modulus": 3}]}),
    RingSpec.model_validate({"components": [{"modulus": 4}, {"modulus": 2}]}),
)


def spec_order(spec: RingSpec) -> int:
    """|R| without building the ring."""
    order = 1
    for comp in spec.components:
        order *= comp.modulus ** (len(comp.monic_poly) - 1)
    return order


def default_ring_specs(min_n: int | None = None, max_n: int | None = None) -> list[RingSpec]:
    """Z_n for min_n ≤ n ≤ max_n, then the fixed polynomial quotients and products."""
    settings = get_settings()
    lo = min_n if min_n is not None else settings.catalog_min_n
    hi = max_n if max_n is not None else settings.catalog_max_n
    return [RingSpec.cyclic(n) for n in range(lo, hi + 1)] + list(EXTRA_RING_SPECS)


def catalog_rings(
    specs: list[RingSpec] | None = None,
    max_order: int | None = None,
    min_n: int | None = None,
    max_n: int | None = None,
) -> list[FiniteRing]:
    """Rings of the catalog in deterministic order, dropping those above max_order."""
    specs = specs if specs is not None else default_ring_specs(min_n, max_n)
    rings = []
    for spec in specs:
        if max_order is not None and spec_order(spec) > max_order:
            continue
        rings.append(ring_make(spec))
    return rings


def least_nonzero_nilpotent(ring: CommutativeRing):
    nilpotents = classify(ring).nilpotents
    for x in ring.elements:
        if x != ring.zero and x in nilpotents:
            return x
    return None


def module_family(ring: CommutativeRing) -> list[PresentedModule]:
    """R, every R/I for 0 ≠ I ≠ R, and for small rings R² and R²/<(n, n)>."""
    bound = get_settings().rank2_max_order
    memo = ring.__dict__.setdefault("_module_family", {})
    if bound in memo:
        return memo[bound]
    family = [regular_module(ring)]
    for ideal in enumerate_ideals(ring):
        if ideal.is_proper and ideal.size > 1:
            family.append(cyclic_quotient(ring, ideal))
    if ring.order <= bound:
        family.append(free_module(ring, 2))
        n = least_nonzero_nilpotent(ring)
        if n is not None:
            family.append(PresentedModule(ring, 2, [(n, n)]))
    memo[bound] = family
    logger.debug(f"{ring.label}: module family of {len(family)}")
    return family


@dataclass(frozen=True)
class Catalog:
    """Rings, their module families, every scalar and a t range."""
    rings: tuple[FiniteRing, ...]
    t_values: tuple[int, ...] = (1,)

    def instances(self) -> Iterator[tuple[FiniteRing, PresentedModule, object, int]]:
        for ring in self.rings:
            for module in module_family(ring):
                for a in ring.elements:
                    for t in self.t_values:
                        yield ring, module, a, t


def default_catalog(max_order: int | None = None, t_values: tuple[int, ...] = (1,)) -> Catalog:
    return Catalog(rings=tuple(catalog_rings(max_order=max_order)), t_values=t_values)
