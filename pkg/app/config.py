"""Configuration settings for redmod."""

from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix ``REDMOD_``)."""

    # Enumeration budget
    max_elems: int = 20000
    hom_max_rank: int = 3

    # Default catalog
    catalog_min_n: int = 2
    catalog_max_n: int = 32
    rank2_max_order: int = 4
    partner_max_size: int = 64

    # Execution
    workers: int = 1
    log_level: str = "INFO"

    # Application settings
    app_name: str = "redmod"
    version: str = "1.0.0"

    model_config = {
        "env_prefix": "REDMOD_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
    }


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
