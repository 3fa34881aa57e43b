"""
Configuration management for the subgroup growth toolkit.
Loads environment variables and provides centralized access to caps and thresholds.
"""
import os
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value in (None, ""):
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Centralized configuration class."""

    # Exact counting caps
    PARTITION_CAP: int = _env_int("PARTITION_CAP", 45)  # literal closed formula
    DP_CAP: int = _env_int("DP_CAP", 300)  # factorized DP
    SAMPLER_PARTITION_CAP: int = _env_int("SAMPLER_PARTITION_CAP", 50)

    # Sequence cache
    CACHE_DIR: str = os.getenv("CACHE_DIR", ".cache/tables") or ".cache/tables"
    CACHE_ENABLED: bool = _env_bool("CACHE_ENABLED", True)
    CACHE_VERIFY_N: int = _env_int("CACHE_VERIFY_N", 10)

    # Sampling
    RETRY_CEILING: int = _env_int("RETRY_CEILING", 10_000)
    DEFAULT_SEED: int = _env_int("DEFAULT_SEED", 20240101)
    DEFAULT_WORKERS: int = _env_int("DEFAULT_WORKERS", 1)
    CHUNK_SIZE: int = _env_int("CHUNK_SIZE", 500)  # samples per RNG stream

    # Oracle budget
    ORACLE_MAX_N_FREE: int = _env_int("ORACLE_MAX_N_FREE", 7)
    ORACLE_MAX_N_TORUS: int = _env_int("ORACLE_MAX_N_TORUS", 6)

    # Statistics
    TV_THRESHOLD: float = _env_float("TV_THRESHOLD", 0.02)
    KS_THRESHOLD: float = _env_float("KS_THRESHOLD", 0.05)
    MAX_FACTORIAL_MOMENT: int = _env_int("MAX_FACTORIAL_MOMENT", 4)
    CONTINGENCY_SUPPORT: int = _env_int("CONTINGENCY_SUPPORT", 10)
    COMPOUND_POISSON_SUPPORT: int = _env_int("COMPOUND_POISSON_SUPPORT", 60)

    # Verification
    VERIFY_TV_DRAWS: int = _env_int("VERIFY_TV_DRAWS", 1_000_000)
    VERIFY_TV_THRESHOLD: float = _env_float("VERIFY_TV_THRESHOLD", 0.01)

    # Homology
    RANK_PRIMES: int = _env_int("RANK_PRIMES", 3)
    RANK_SEED: int = _env_int("RANK_SEED", 7919)
    RANK_EXACT_SPOTCHECK_MAX: int = _env_int("RANK_EXACT_SPOTCHECK_MAX", 80)

    # Floating point
    MP_DPS: int = _env_int("MP_DPS", 50)

    # Optional override for groups outside the standing hypothesis
    ALLOW_DEGENERATE: bool = _env_bool("ALLOW_DEGENERATE", False)

    # Where reports go when --out is omitted (None = stdout)
    DEFAULT_OUTPUT: Optional[str] = os.getenv("DEFAULT_OUTPUT") or None

    @classmethod
    def validate(cls) -> bool:
        """Validate that caps and thresholds are usable."""
        positive_fields = {
            "PARTITION_CAP": cls.PARTITION_CAP,
            "DP_CAP": cls.DP_CAP,
            "SAMPLER_PARTITION_CAP": cls.SAMPLER_PARTITION_CAP,
            "RETRY_CEILING": cls.RETRY_CEILING,
            "DEFAULT_WORKERS": cls.DEFAULT_WORKERS,
            "CHUNK_SIZE": cls.CHUNK_SIZE,
            "RANK_PRIMES": cls.RANK_PRIMES,
            "MAX_FACTORIAL_MOMENT": cls.MAX_FACTORIAL_MOMENT,
            "CONTINGENCY_SUPPORT": cls.CONTINGENCY_SUPPORT,
            "COMPOUND_POISSON_SUPPORT": cls.COMPOUND_POISSON_SUPPORT,
            "VERIFY_TV_DRAWS": cls.VERIFY_TV_DRAWS,
            "MP_DPS": cls.MP_DPS,
        }
        bad = [k for k, v in positive_fields.items() if v < 1]

        unit_fields = {
            "TV_THRESHOLD": cls.TV_THRESHOLD,
            "KS_THRESHOLD": cls.KS_THRESHOLD,
            "VERIFY_TV_THRESHOLD": cls.VERIFY_TV_THRESHOLD,
        }
        bad += [k for k, v in unit_fields.items() if not 0.0 < v < 1.0]

        if cls.DEFAULT_SEED < 0 or cls.DEFAULT_SEED >= 2**64:
            bad.append("DEFAULT_SEED")

        if bad:
            raise ValueError(
                f"Invalid configuration values: {', '.join(bad)}. "
                "Please fix these in your environment or .env file."
            )

        return True


# Validate configuration on import
try:
    Config.validate()
except ValueError as e:
    print(f"⚠️ Configuration Warning: {e}")
