"""Application settings and configuration."""

from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Ambient settings loaded from environment variables.

    Only logging and the default random seed are environment driven.
    Numerical tolerances are carried by the config models of the owning
    packages and overridden through CLI flags or request bodies.
    """

    # Logging
    log_level: str = "INFO"
    log_format: Literal["json", "console"] = "json"

    # Reproducibility
    default_seed: int = 20040817

    # Pydantic v2 settings
    model_config = SettingsConfigDict(
        env_prefix="NOETHER_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Global settings instance
settings = Settings()
