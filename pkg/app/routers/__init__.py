"""API routers for redmod."""

from app.routers.checks import router as checks_router

__all__ = [
    "checks_router",
]
