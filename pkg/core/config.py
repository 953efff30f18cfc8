"""
Configuration management for tworep.
Runtime settings come from the environment (optionally a .env file).
"""
import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from core.constants import (
    FILTRATION_CAP_DEFAULT,
    OUTPUT_FORMATS,
    RANDOM_SEED_DEFAULT,
    SAMPLE_COUNT_DEFAULT,
    SEARCH_BUDGET_DEFAULT,
)


load_dotenv()


def _parse_int_env(name: str, default: int) -> int:
    """Parse integer env var with descriptive error on failure."""
    val = os.getenv(name)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        raise ValueError(f"Invalid integer for {name}: '{val}'") from None


def _parse_bool_env(name: str, default: bool) -> bool:
    val = os.getenv(name)
    if val is None:
        return default
    return str(val).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class Settings:
    """Centralized runtime configuration with sane defaults."""
    log_level: str
    filtration_cap: int
    sample_count: int
    random_seed: int
    search_budget: int
    numerical_multiplicity: bool
    default_format: str

    @classmethod
    def from_env(cls) -> "Settings":
        """Create Settings from environment variables."""
        default_format = str(os.getenv("TWOREP_DEFAULT_FORMAT", "json")).lower()
        if default_format not in OUTPUT_FORMATS:
            raise ValueError(
                f"Invalid TWOREP_DEFAULT_FORMAT: '{default_format}' "
                f"(expected one of {', '.join(OUTPUT_FORMATS)})"
            )

        filtration_cap = _parse_int_env("TWOREP_FILTRATION_CAP", FILTRATION_CAP_DEFAULT)
        if filtration_cap < 1:
            raise ValueError("TWOREP_FILTRATION_CAP must be positive")

        return cls(
            log_level=str(os.getenv("TWOREP_LOG_LEVEL", "WARNING")).upper(),
            filtration_cap=filtration_cap,
            sample_count=_parse_int_env("TWOREP_SAMPLE_COUNT", SAMPLE_COUNT_DEFAULT),
            random_seed=_parse_int_env("TWOREP_RANDOM_SEED", RANDOM_SEED_DEFAULT),
            search_budget=_parse_int_env("TWOREP_SEARCH_BUDGET", SEARCH_BUDGET_DEFAULT),
            numerical_multiplicity=_parse_bool_env("TWOREP_NUMERICAL_MULTIPLICITY", True),
            default_format=default_format,
        )


# Global settings instance
settings = Settings.from_env()

# Logging setup
logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s | %(levelname)s | %(message)s",
)
logger = logging.getLogger(__name__)
