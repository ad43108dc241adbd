"""Batch audit runs, counterexample search and single checks."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from pydantic import ValidationError

from app.config import Settings, get_settings
from app.exceptions import BadConfig
from app.models.module import CheckRequest, GammaResponse, ModuleSpec
from app.models.report import (
    AuditReport,
    AuditStatus,
    CounterexampleWitness,
    Expectation,
    RunConfig,
    RunReport,
    SummaryCounts,
)
from app.models.ring import RingSpec
from app.services.catalog import catalog_rings
from app.services.claims import (
    Claim,
    ClaimContext,
    describe_claims,
    expectation_of,
    resolve_claim,
    resolve_claims,
    run_claim,
)
from app.services.modules import PresentedModule, module_present
from app.services.ring_core import FiniteRing, ring_make
from app.services.torsion import gamma, gln, is_at_reduced, torsion_chain
from app.services.witnesses import reverify
from app.utils.helpers import ensure_budget

logger = logging.getLogger(__name__)


def parse_spec(spec: dict[str, Any]) -> tuple[FiniteRing, PresentedModule | None]:
    """A module spec ``{ring, rank, relations}`` or a bare ring spec ``{components}``."""
    try:
        if "components" in spec:
            return ring_make(RingSpec.model_validate(spec)), None
        module_spec = ModuleSpec.model_validate(spec)
    except ValidationError as e:
        raise BadConfig(f"invalid spec: {e.errors()[0]['msg']}") from None
    ring = ring_make(module_spec.ring)
    relations = [[ring.element(x) for x in rel] for rel in module_spec.relations]
    return ring, module_present(ring, module_spec.rank, relations)


def _run_task(task: tuple[dict, str, int, int]) -> list[dict]:
    """Worker entry point: rebuild the ring from its spec and run one claim."""
    spec, claim_id, t, degree = task
    ring = ring_make(RingSpec.model_validate(spec))
    reports = run_claim(resolve_claim(claim_id), ClaimContext(ring=ring, t=t, degree=degree))
    return [r.model_dump(mode="json") for r in reports]


def summarize(reports: list[AuditReport]) -> tuple[SummaryCounts, int]:
    """Status tallies and the number of failures of claims expected to hold."""
    counts = SummaryCounts()
    failed_expected = 0
    for report in reports:
        setattr(counts, report.status.value, getattr(counts, report.status.value) + 1)
        if report.status != AuditStatus.FAILS:
            continue
        expectation = expectation_of(report.claim)
        if expectation == Expectation.HOLDS:
            failed_expected += 1
        else:
            logger.warning(
                f"{report.claim} fails on {report.instance.ring} ({expectation.value}): {report.witness}"
            )
    return counts, failed_expected


class AuditService:
    """Entry point shared by the CLI and the HTTP routes."""

    def __init__(self, settings: Settings | None = None):
        self.settings = settings or get_settings()

    def claims(self) -> list[dict[str, Any]]:
        return describe_claims()

    def check(self, request: CheckRequest) -> list[AuditReport]:
        """Run one claim on the ring or module in ``request.spec``.

        Args:
            request: Spec, claim id, optional scalar and multiplicative set, t.

        Returns:
            The claim's reports; budget overruns come back as skipped entries.
        """
        ring, module = parse_spec(request.spec)
        claim = resolve_claim(request.claim)
        a = ring.element(request.a) if request.a is not None else None
        mult_set = None
        if request.mult_set is not None:
            mult_set = tuple(ring.element(g) for g in request.mult_set.generators)
        ctx = ClaimContext(ring=ring, t=request.t, module=module, a=a,
                           degree=request.degree, mult_set=mult_set)
        return run_claim(claim, ctx)

    def gamma(self, spec: dict[str, Any], a_literal: Any, t: int) -> GammaResponse:
        """Γ_a, a^tΓ_a and the annihilator chain of one module."""
        ring, module = parse_spec(spec)
        if module is None:
            module = module_present(ring, 1)
        a = ring.element(a_literal)
        chain = torsion_chain(module, a)
        return GammaResponse(
            module=module.label,
            a=ring.to_literal(a),
            t=t,
            gamma=gamma(module, a).to_report(),
            gln=gln(module, a, t).to_report(),
            chain=[module.literals(level) for level in chain.levels],
            stabilization_index=chain.stabilization_index,
            at_reduced=is_at_reduced(module, a, t).reduced,
        )

    def _rings(self, config: RunConfig) -> list[FiniteRing]:
        return catalog_rings(
            specs=config.rings,
            max_order=config.max_order,
            min_n=config.min_n,
            max_n=config.max_n,
        )

    def _instance_reports(self, config: RunConfig, claims: list[Claim]) -> list[AuditReport]:
        instance = config.instance
        ring, module = parse_spec(instance.module.model_dump())
        a = ring.element(instance.a) if instance.a is not None else None
        ts = [instance.t] if instance.t is not None else config.t
        reports = []
        for claim in claims:
            for t in ts if claim.uses_t else ts[:1]:
                ctx = ClaimContext(ring=ring, t=t, module=module, a=a, degree=config.degree)
                reports.extend(run_claim(claim, ctx))
        return reports

    def _catalog_reports(self, config: RunConfig, claims: list[Claim]) -> list[AuditReport]:
        tasks = [
            (ring.to_spec().model_dump(), claim.id, t, config.degree)
            for ring in self._rings(config)
            for claim in claims
            for t in (config.t if claim.uses_t else config.t[:1])
        ]
        workers = config.workers or self.settings.workers
        logger.info(f"Running {len(tasks)} audits with {workers} worker(s)")
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                batches = list(pool.map(_run_task, tasks))
        else:
            batches = [_run_task(task) for task in tasks]
        return [AuditReport.model_validate(r) for batch in batches for r in batch]

    def run_report(self, config: RunConfig) -> RunReport:
        """Execute every requested audit and assemble the report document in catalog order."""
        started = time.perf_counter()
        claims = resolve_claims(config.claims)
        if not claims:
            reports = []
        elif config.instance is not None:
            reports = self._instance_reports(config, claims)
        else:
            reports = self._catalog_reports(config, claims)
        summary, failed_expected = summarize(reports)
        report = RunReport(
            tool_version=f"{self.settings.app_name} {self.settings.version}",
            configuration=config.model_dump(mode="json"),
            reports=reports,
            summary=summary,
            failed_expected=failed_expected,
            wall_time=round(time.perf_counter() - started, 3),
        )
        logger.info(
            f"Run finished: {len(reports)} reports, {summary.fails} fails, "
            f"{failed_expected} expected-to-hold failures"
        )
        return report

    def search(self, claim_id: str, t: int, max_order: int) -> list[CounterexampleWitness]:
        """Scan catalog rings of order ≤ max_order for re-verified failures of one claim."""
        ensure_budget("search ring order", max_order, self.settings.max_elems)
        claim = resolve_claim(claim_id)
        found = []
        for ring in catalog_rings(max_order=max_order):
            for report in run_claim(claim, ClaimContext(ring=ring, t=t)):
                if report.status != AuditStatus.FAILS:
                    continue
                if not reverify(report):
                    continue
                found.append(CounterexampleWitness(
                    claim=report.claim,
                    ring=ring.label,
                    ring_spec=ring.to_spec(),
                    t=t,
                    witness=report.witness,
                    reverified=True,
                ))
        logger.info(f"Search for {claim.id} at t={t} up to order {max_order}: {len(found)} witnesses")
        return found
