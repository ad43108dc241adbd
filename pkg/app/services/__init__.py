"""Algebra engine and audit services for redmod."""

from app.services.ring_core import CommutativeRing, FiniteRing, ring_make
from app.services.modules import Module, PresentedModule, Submodule
from app.services.harness import AuditService

__all__ = [
    "CommutativeRing",
    "FiniteRing",
    "ring_make",
    "Module",
    "PresentedModule",
    "Submodule",
    "AuditService",
]
