from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    WORKERS: int = 1
    ORACLE_LIMIT: int = 22
    TWINCOVER_BUDGET: int = 16
    CLIQUEWIDTH_CAP: int = 5
    DEFAULT_REPEATS: Optional[int] = None

    # auto-selector thresholds
    AUTO_ORACLE_MAX_N: int = 18
    AUTO_TWINCOVER_MAX: int = 8
    AUTO_TWDP_MAX_WIDTH: int = 7
    AUTO_RANK_MAX_WIDTH: int = 14

    LOG_LEVEL: str = "INFO"
    DATABASE_URL: str = "sqlite:///./bench.db"

    model_config = SettingsConfigDict(env_prefix="CUTCRAFT_", env_file=".env", case_sensitive=True, extra="ignore")


settings = Settings()


def default_repeats(n: int) -> int:
    """Monte-Carlo repetitions used when the caller gives none."""
    if settings.DEFAULT_REPEATS is not None:
        return settings.DEFAULT_REPEATS
    return max(10, (max(n, 1) - 1).bit_length())
