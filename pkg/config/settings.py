"""Application settings using Pydantic."""

from pathlib import Path
from typing import List

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Engine settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        populate_by_name=True,
    )

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")

    # Fields
    # Conway-style modulus table; MODLIE_DATA points at an alternative copy
    modulus_table_path: Path = Field(
        default=PROJECT_ROOT / "data" / "conway_moduli.json",
        alias="MODLIE_DATA",
    )
    supported_primes: str = Field(default="5,7,11,13", alias="SUPPORTED_PRIMES")
    enumeration_bound: int = Field(default=100_000, alias="ENUMERATION_BOUND")
    max_extension_degree: int = Field(default=4, alias="MAX_EXTENSION_DEGREE")

    # Algebra construction
    dimension_cap: int = Field(default=250, alias="DIMENSION_CAP")
    simplicity_check_max_dim: int = Field(default=60, alias="SIMPLICITY_CHECK_MAX_DIM")

    # Searches
    search_budget: int = Field(default=200, alias="SEARCH_BUDGET")  # random draws
    exhaustive_bound: int = Field(default=10_000, alias="EXHAUSTIVE_BOUND")  # field points
    pair_budget: int = Field(default=100_000_000, alias="PAIR_BUDGET")  # census pairs

    # Verification
    verification_trials: int = Field(default=20, alias="VERIFICATION_TRIALS")

    # Reports
    report_schema_version: int = Field(default=1, alias="REPORT_SCHEMA_VERSION")

    @property
    def supported_primes_list(self) -> List[int]:
        """Parse supported primes from comma-separated string."""
        if not self.supported_primes:
            return []
        return [int(p.strip()) for p in self.supported_primes.split(",") if p.strip()]


# Global settings instance
settings = Settings()
