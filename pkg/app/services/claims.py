"""Registry of auditable claims and the runners that evaluate them on one ring."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from app.config import get_settings
from app.exceptions import BadConfig, OrderBudgetExceeded
from app.models.report import AuditReport, AuditStatus, Expectation
from app.services.catalog import module_family
from app.services.extensions import localization_audit, mult_set_closure, poly_gln_check, scalar_audit
from app.services.ideals import enumerate_ideals, projection, quotient_ring
from app.services.modules import Module, PresentedModule, regular_module
from app.services.regularity import RING_AUDITS, claim_audit
from app.services.ring_core import CommutativeRing
from app.services.torsion import (
    functor_audit,
    make_instance,
    stratify_audit,
    sum_audit,
    verify_equivalences,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClaimContext:
    """Everything a runner needs: the ring, t, and an optional fixed module, scalar or S."""
    ring: CommutativeRing
    t: int
    module: Module | None = None
    a: Any = None
    degree: int = 2
    mult_set: tuple | None = None

    @property
    def modules(self) -> list[Module]:
        return [self.module] if self.module is not None else module_family(self.ring)

    @property
    def scalars(self) -> tuple:
        return (self.a,) if self.a is not None else self.ring.elements


@dataclass(frozen=True)
class Claim:
    id: str
    expectation: Expectation
    description: str
    runner: Callable[[ClaimContext], list[AuditReport]]
    scope: str = "ring"
    uses_t: bool = True
    aliases: tuple[str, ...] = field(default=())


NOTE_LIMIT = 10


def _capped(notes: list[str]) -> list[str]:
    if len(notes) <= NOTE_LIMIT:
        return notes
    return notes[:NOTE_LIMIT] + [f"{len(notes) - NOTE_LIMIT} more notes omitted"]


def _first_failure(reports: Sequence[AuditReport]) -> AuditReport | None:
    return next((r for r in reports if r.status == AuditStatus.FAILS), None)


def _aggregate(claim: str, ctx: ClaimContext, module: Module | None, reports: list[AuditReport],
               what: str) -> AuditReport:
    """Fold per-scalar reports into one: holds iff every one holds."""
    failure = _first_failure(reports)
    held = sum(1 for r in reports if r.status == AuditStatus.HOLDS)
    notes = sorted({n for r in reports for n in r.notes})
    if failure is not None:
        # the failing instance's own notes come first so the cap keeps them
        return AuditReport(
            claim=claim,
            instance=failure.instance,
            status=AuditStatus.FAILS,
            witness=failure.witness,
            detail=failure.detail,
            notes=_capped(list(dict.fromkeys([*failure.notes, *notes]))),
        )
    status = AuditStatus.HOLDS if held else AuditStatus.HYPOTHESIS_NOT_MET
    return AuditReport(
        claim=claim,
        instance=make_instance(ctx.ring, module, ctx.a, ctx.t),
        status=status,
        detail=f"{held} {what}",
        notes=_capped(notes),
    )


def run_ring_audit(claim_id: str) -> Callable[[ClaimContext], list[AuditReport]]:
    def runner(ctx: ClaimContext) -> list[AuditReport]:
        modules = [ctx.module] if ctx.module is not None else None
        return [claim_audit(ctx.ring, ctx.t, claim_id, modules)]
    return runner


def run_stratify(ctx: ClaimContext) -> list[AuditReport]:
    return [stratify_audit(ctx.ring)]


def _equivalence_report(module: Module, a, t: int) -> AuditReport:
    report = verify_equivalences(module, a, t)
    flags = report.conditions.model_dump()
    if report.consistent:
        verdict = "true" if report.conditions.definitional else "false"
        return AuditReport(
            claim="equivalences",
            instance=report.instance,
            status=AuditStatus.HOLDS,
            detail=f"all conditions {verdict}, stabilization index {report.stabilization_index}",
            notes=[f"{name}: {value}" for name, value in flags.items()],
        )
    return AuditReport(
        claim="equivalences",
        instance=report.instance,
        status=AuditStatus.FAILS,
        witness={"conditions": flags, "definitional_witness": report.witness},
        detail="conditions disagree",
    )


def run_equivalences(ctx: ClaimContext) -> list[AuditReport]:
    if ctx.module is not None and ctx.a is not None:
        return [_equivalence_report(ctx.module, ctx.a, ctx.t)]
    return [
        _aggregate("equivalences", ctx, module,
                   [_equivalence_report(module, a, ctx.t) for a in ctx.scalars], "scalars consistent")
        for module in ctx.modules
    ]


def _partners(ctx: ClaimContext) -> list[Module]:
    limit = get_settings().partner_max_size
    return [m for m in module_family(ctx.ring) if m.size <= limit]


def run_functor(ctx: ClaimContext) -> list[AuditReport]:
    partners = _partners(ctx)
    out = []
    for module in ctx.modules:
        if not isinstance(module, PresentedModule):
            raise BadConfig("functor checks need a presented module")
        per_scalar = [functor_audit(module, a, ctx.t, partners) for a in ctx.scalars]
        if len(per_scalar) == 1:
            out.extend(per_scalar[0])
            continue
        for i, first in enumerate(per_scalar[0]):
            out.append(_aggregate(first.claim, ctx, module, [reports[i] for reports in per_scalar], "scalars"))
    return out


def run_sum(ctx: ClaimContext) -> list[AuditReport]:
    rank_one = [m for m in ctx.modules if isinstance(m, PresentedModule) and m.rank == 1]
    if ctx.module is not None:
        pairs = [(ctx.module, regular_module(ctx.ring))] if isinstance(ctx.module, PresentedModule) else []
    else:
        pairs = [(p, q) for i, p in enumerate(rank_one) for q in rank_one[i:]]
    out = []
    for first, second in pairs:
        reports = [sum_audit([first, second], a, ctx.t) for a in ctx.scalars]
        out.append(reports[0] if len(reports) == 1 else
                   _aggregate("sum", ctx, None, reports, "scalars"))
    return out


def run_poly(ctx: ClaimContext) -> list[AuditReport]:
    reports = [poly_gln_check(ctx.ring, a, ctx.t, ctx.degree) for a in ctx.scalars]
    if len(reports) == 1:
        return reports
    return [_aggregate("poly", ctx, regular_module(ctx.ring), reports, "scalars")]


def run_localization(ctx: ClaimContext) -> list[AuditReport]:
    ring = ctx.ring
    if ctx.mult_set is not None:
        sets = [mult_set_closure(ring, ctx.mult_set)]
    else:
        sets = [mult_set_closure(ring, [g]) for g in ring.elements]
    out = []
    for module in ctx.modules:
        if isinstance(module, PresentedModule) and module.rank != 1:
            continue
        reports = [localization_audit(module, s, ctx.t) for s in sets]
        out.append(reports[0] if len(reports) == 1 else
                   _aggregate("localization", ctx, module, reports, "multiplicative sets"))
    return out


def run_scalar(ctx: ClaimContext) -> list[AuditReport]:
    """Restriction along every projection R → R/I, over the family of R/I."""
    ring = ctx.ring
    reports = []
    for ideal in enumerate_ideals(ring):
        if not ideal.is_proper:
            continue
        quotient = quotient_ring(ring, ideal)
        hom = projection(quotient)
        for module in module_family(quotient):
            reports.append(scalar_audit(hom, module, ctx.t))
    return [_aggregate("scalar", ctx, None, reports, "restrictions")]


_DESCRIPTIONS = {
    "quotient_closure": "t-regular rings are closed under quotients",
    "domain_iff_field": "a domain is t-regular iff it is a field",
    "semiprime_implies_eps": "t-regular with every (0:b) semiprime implies ε^t-reduced",
    "thm_all_modules": "with every (0:b) semiprime: all modules ε^t-reduced ⇔ all cyclic modules are ⇔ t-regular",
    "regular_iff": "regular ⇔ t-regular and every ideal semiprime",
    "scalar_restriction": "ε^t-reducedness passes along restriction of scalars (and back for surjections)",
    "cyclic_characterization": "M is ε^t-reduced iff every cyclic submodule is",
    "faithful": "R a^t-reduced ⇔ submodules of free modules are ⇔ a faithful a^t-reduced module exists",
    "noeth_t_regular_implies_eps": "a Noetherian t-regular ring is ε^t-reduced",
    "noeth_reduced_iff_eps": "a Noetherian ring is reduced iff it is ε^t-reduced",
    "noeth_t_regular_iff_reduced": "a Noetherian ring is t-regular iff it is reduced",
    "implication_square": "reduced ⇒ a-reduced ⇒ a^t-reduced and reduced ⇒ ε^t-reduced ⇒ a^t-reduced",
    "reduced_examples": "a-torsion-free modules and free modules over a^t-reduced rings are a^t-reduced",
    "quotient_images": "quotients of a^t-reduced modules by cyclic submodules are a^t-reduced",
    "ann_semiprime_reduced_iff_eps": "with every (0:m) semiprime, reduced ⇔ ε^t-reduced",
    "noeth_fg_reduced_iff_eps": "finitely generated modules over Noetherian rings: reduced ⇔ ε^t-reduced",
    "special_primary_t_regular": "rings whose elements are units or nilpotent are t-regular",
    "local_cohomology_degree_zero": "for a^t-reduced M and I = (a): Γ_I(M) ≅ Hom(R/I^t, M)",
}

_DISPUTED = {
    "noeth_reduced_iff_eps",
    "noeth_t_regular_iff_reduced",
    "noeth_fg_reduced_iff_eps",
    "special_primary_t_regular",
}

_MODULE_SCOPED = {
    "cyclic_characterization",
    "implication_square",
    "reduced_examples",
    "quotient_images",
    "ann_semiprime_reduced_iff_eps",
    "noeth_fg_reduced_iff_eps",
    "local_cohomology_degree_zero",
}


def _expectation(claim_id: str) -> Expectation:
    if claim_id in _DISPUTED:
        return Expectation.DISPUTED
    if claim_id == "quotient_images":
        return Expectation.CONCLUSION_ONLY
    return Expectation.HOLDS


CLAIMS: dict[str, Claim] = {
    claim_id: Claim(
        id=claim_id,
        expectation=_expectation(claim_id),
        description=_DESCRIPTIONS[claim_id],
        runner=run_ring_audit(claim_id),
        scope="module" if claim_id in _MODULE_SCOPED else "ring",
    )
    for claim_id in RING_AUDITS
}
CLAIMS.update({
    "stratify": Claim(
        id="stratify", expectation=Expectation.HOLDS,
        description="the nilradical is the union of the strata aΓ_a(R)",
        runner=run_stratify, uses_t=False, aliases=("stratify_as_claim",),
    ),
    "equivalences": Claim(
        id="equivalences", expectation=Expectation.HOLDS,
        description="the equivalent forms of a^t-reducedness agree",
        runner=run_equivalences, scope="module",
    ),
    "functor": Claim(
        id="functor", expectation=Expectation.HOLDS,
        description="a^tΓ_a is a radical, characteristic, composes, and commutes with the ideal action",
        runner=run_functor, scope="module",
    ),
    "sum": Claim(
        id="sum", expectation=Expectation.HOLDS,
        description="a^tΓ_a commutes with finite direct sums",
        runner=run_sum, scope="module",
    ),
    "poly": Claim(
        id="poly", expectation=Expectation.HOLDS,
        description="a^tΓ_a(R)[x] = a^tΓ_a(R[x]) on bounded degree",
        runner=run_poly,
    ),
    "localization": Claim(
        id="localization", expectation=Expectation.DISPUTED,
        description="M is ε^t-reduced iff S⁻¹M is",
        runner=run_localization, scope="module",
    ),
    "scalar": Claim(
        id="scalar", expectation=Expectation.HOLDS,
        description="restriction of scalars along projections preserves ε^t-reducedness",
        runner=run_scalar,
    ),
})

ALIASES: dict[str, str] = {alias: c.id for c in CLAIMS.values() for alias in c.aliases}


def resolve_claim(claim_id: str) -> Claim:
    """Look up a claim by id or alias; raises BadConfig when unknown."""
    claim = CLAIMS.get(ALIASES.get(claim_id, claim_id))
    if claim is None:
        raise BadConfig(f"unknown claim {claim_id!r}")
    return claim


def resolve_claims(ids: Sequence[str]) -> list[Claim]:
    """Expand ``all`` and aliases, keeping the given order without repeats."""
    if list(ids) == ["all"]:
        return list(CLAIMS.values())
    seen: dict[str, Claim] = {}
    for claim_id in ids:
        claim = resolve_claim(claim_id)
        seen.setdefault(claim.id, claim)
    return list(seen.values())


def expectation_of(report_claim: str) -> Expectation:
    """Expectation of a report id; ``functor.radical`` inherits from ``functor``."""
    root = report_claim.split(".", 1)[0]
    return resolve_claim(root).expectation


def run_claim(claim: Claim, ctx: ClaimContext) -> list[AuditReport]:
    """Run one claim, turning a budget overrun into a skipped entry."""
    try:
        return claim.runner(ctx)
    except OrderBudgetExceeded as e:
        logger.warning(f"Skipped {claim.id} on {ctx.ring.label}: {e}")
        return [AuditReport(
            claim=claim.id,
            instance=make_instance(ctx.ring, ctx.module, ctx.a, ctx.t),
            status=AuditStatus.SKIPPED,
            detail=str(e),
        )]


def describe_claims() -> list[dict[str, Any]]:
    return [
        {
            "id": c.id,
            "scope": c.scope,
            "expectation": c.expectation.value,
            "description": c.description,
            "aliases": list(c.aliases),
        }
        for c in CLAIMS.values()
    ]
