"""Audit API endpoints."""

from typing import Any, Callable

from fastapi import APIRouter, Depends, HTTPException, status
from fastapi.concurrency import run_in_threadpool

from app.config import get_settings
from app.models.module import CheckRequest, GammaRequest, GammaResponse, SearchRequest
from app.models.report import AuditReport, CounterexampleWitness, RunConfig, RunReport
from app.services.harness import AuditService

router = APIRouter(tags=["checks"])


def get_audit_service() -> AuditService:
    """Dependency for the audit service."""
    return AuditService(get_settings())


async def _call(fn: Callable, *args) -> Any:
    """Run CPU-bound engine work off the event loop; domain errors become 400s."""
    try:
        return await run_in_threadpool(fn, *args)
    except ValueError as e:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=str(e),
        )


@router.get("/claims")
async def list_claims(
    service: AuditService = Depends(get_audit_service),
) -> list[dict[str, Any]]:
    """List every claim id with its scope and expectation."""
    return service.claims()


@router.post("/checks", response_model=list[AuditReport])
async def run_check(
    request: CheckRequest,
    service: AuditService = Depends(get_audit_service),
) -> list[AuditReport]:
    """Check one claim on one ring or module."""
    return await _call(service.check, request)


@router.post("/gamma", response_model=GammaResponse)
async def compute_gamma(
    request: GammaRequest,
    service: AuditService = Depends(get_audit_service),
) -> GammaResponse:
    """Compute Γ_a(M), a^tΓ_a(M) and the annihilator chain."""
    return await _call(service.gamma, request.spec, request.a, request.t)


@router.post("/catalog", response_model=RunReport)
async def run_catalog(
    config: RunConfig,
    service: AuditService = Depends(get_audit_service),
) -> RunReport:
    """Run a batch of claims over the catalog or one explicit instance."""
    return await _call(service.run_report, config)


@router.post("/search", response_model=list[CounterexampleWitness])
async def search_counterexamples(
    request: SearchRequest,
    service: AuditService = Depends(get_audit_service),
) -> list[CounterexampleWitness]:
    """Search catalog rings for re-verified counterexamples to a claim."""
    return await _call(service.search, request.claim, request.t, request.max_order)
