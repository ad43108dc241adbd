"""Pytest configuration and fixtures for redmod tests."""

import os
from typing import AsyncGenerator
import pytest
import pytest_asyncio
from httpx import AsyncClient, ASGITransport

# Set test environment before importing app modules
os.environ["REDMOD_LOG_LEVEL"] = "WARNING"
os.environ["REDMOD_CATALOG_MAX_N"] = "12"
os.environ["REDMOD_WORKERS"] = "1"

from app.config import get_settings
from app.main import app
from app.models.ring import RingSpec
from app.services.harness import AuditService
from app.services.modules import PresentedModule, regular_module
from app.services.ring_core import FiniteRing, cyclic_ring, ring_make


@pytest.fixture(autouse=True)
def fresh_settings():
    """Re-read settings for every test so monkeypatched env vars take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest_asyncio.fixture
async def client() -> AsyncGenerator[AsyncClient, None]:
    """Create async HTTP client for API testing."""
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://test") as ac:
        yield ac


@pytest.fixture
def audit_service() -> AuditService:
    return AuditService(get_settings())


@pytest.fixture
def z4() -> FiniteRing:
    return cyclic_ring(4)


@pytest.fixture
def z6() -> FiniteRing:
    return cyclic_ring(6)


@pytest.fixture
def z8() -> FiniteRing:
    return cyclic_ring(8)


@pytest.fixture
def z9() -> FiniteRing:
    return cyclic_ring(9)


@pytest.fixture
def z12() -> FiniteRing:
    return cyclic_ring(12)


@pytest.fixture
def z16() -> FiniteRing:
    return cyclic_ring(16)


@pytest.fixture
def f4() -> FiniteRing:
    """The field with four elements, Z2[x]/(x²+x+1)."""
    return ring_make({"components": [{"modulus": 2, "monic_poly": [1, 1, 1]}]})


@pytest.fixture
def z8_regular(z8: FiniteRing) -> PresentedModule:
    return regular_module(z8)


@pytest.fixture
def z16_spec() -> dict:
    """Z16 as a module over itself, in request form."""
    return {"ring": RingSpec.cyclic(16).model_dump(), "rank": 1, "relations": []}


@pytest.fixture
def spec_file(tmp_path):
    """Write a spec dict to a JSON file and return its path."""
    import json

    def write(spec: dict, name: str = "spec.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(spec), encoding="utf-8")
        return str(path)

    return write
