"""
Runtime settings for lloc

Values come from environment variables, optionally loaded from a .env file in
the working directory. Solver-level options live in PipelineConfig instead.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator

try:
    from dotenv import load_dotenv
    DOTENV_AVAILABLE = True
except ImportError:
    DOTENV_AVAILABLE = False
    load_dotenv = None

logger = logging.getLogger(__name__)

# Arrangement enumeration is exponential in b; 6 is the largest cap we accept.
EXACT_CAP_DEFAULT = 5
EXACT_CAP_MAX = 6


class Settings(BaseModel):
    """Process-wide settings read from the environment"""
    threads: int = Field(default=0, ge=0)
    log_level: str = "INFO"
    exact_cap: int = Field(default=EXACT_CAP_DEFAULT, ge=1, le=EXACT_CAP_MAX)
    estimate_samples: int = Field(default=50_000, ge=1)
    estimate_threshold: int = Field(default=150, ge=3)
    heuristic_restarts: int = Field(default=20, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level: {value}")
        return level

    @property
    def worker_count(self) -> int:
        """Number of worker threads, resolving 0 to the CPU count"""
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            threads=int(os.getenv("LLOC_THREADS", "0")),
            log_level=os.getenv("LLOC_LOG_LEVEL", "INFO"),
            exact_cap=int(os.getenv("LLOC_EXACT_CAP", str(EXACT_CAP_DEFAULT))),
            estimate_samples=int(os.getenv("LLOC_ESTIMATE_SAMPLES", "50000")),
            estimate_threshold=int(os.getenv("LLOC_ESTIMATE_THRESHOLD", "150")),
            heuristic_restarts=int(os.getenv("LLOC_HEURISTIC_RESTARTS", "20")),
        )


_settings: Optional[Settings] = None


def load_env_file(path: Optional[Path] = None) -> bool:
    """Load a .env file if python-dotenv is installed and the file exists"""
    env_path = path or Path.cwd() / ".env"
    if not DOTENV_AVAILABLE:
        logger.debug("python-dotenv not installed, using environment variables only")
        return False
    if not env_path.exists():
        return False
    load_dotenv(env_path)
    logger.debug(f"Loaded configuration from {env_path}")
    return True


def get_settings() -> Settings:
    """Get global settings instance (singleton)"""
    global _settings

    if _settings is None:
        load_env_file()
        _settings = Settings.from_env()

    return _settings


def reset_settings():
    """Reset global settings (for testing)"""
    global _settings
    _settings = None
