"""
Runtime settings and logging setup.

Settings come from environment variables, optionally seeded from a ``.env``
file next to this module (local development only).
"""
import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

ENV_PREFIX = "STABKIT_"
LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")

_env_loaded = False
_settings: Optional["Settings"] = None


def load_environment() -> Optional[Path]:
    """Load ``.env`` beside this file once, never overriding real env vars."""
    global _env_loaded
    if _env_loaded:
        return None
    _env_loaded = True

    if os.getenv(f"{ENV_PREFIX}SKIP_DOTENV"):
        logger.info("[ENV] STABKIT_SKIP_DOTENV set, skipping .env load")
        return None

    from dotenv import load_dotenv

    env_file_path = Path(__file__).resolve().parent / ".env"
    if env_file_path.exists():
        load_dotenv(dotenv_path=env_file_path, override=False)
        logger.info(f"[ENV] .env file exists: True, loaded from: {env_file_path}")
        return env_file_path
    logger.debug(f"[ENV] .env file exists: False, expected at: {env_file_path}")
    return None


class Settings(BaseModel):
    log_level: str = "INFO"
    oracle_max_qubits: int = Field(default=6, ge=1, le=14)
    enumerate_max_qubits: int = Field(default=3, ge=1, le=4)
    default_seed: int = Field(default=0, ge=0)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level

    @classmethod
    def from_env(cls) -> "Settings":
        load_environment()
        raw = {
            "log_level": os.getenv(f"{ENV_PREFIX}LOG_LEVEL"),
            "oracle_max_qubits": os.getenv(f"{ENV_PREFIX}ORACLE_MAX_QUBITS"),
            "enumerate_max_qubits": os.getenv(f"{ENV_PREFIX}ENUMERATE_MAX_QUBITS"),
            "default_seed": os.getenv(f"{ENV_PREFIX}DEFAULT_SEED"),
        }
        return cls(**{key: value for key, value in raw.items() if value is not None})


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Forget cached settings so the next ``get_settings`` re-reads the environment."""
    global _settings
    _settings = None


def configure_logging(level: Optional[str] = None) -> None:
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO))
    logging.getLogger().setLevel(getattr(logging, level, logging.INFO))
