from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Computation defaults, overridable from the environment or a .env file."""

    DEPTH: int = 20
    BOUND: int = 8
    CAP: int = 12
    WILD_CUTOFF: int = 6
    LOG_LEVEL: str = "WARNING"

    class Config:
        env_prefix = "QBLOCKS_"
        env_file = ".env"
        env_file_encoding = "utf-8"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
