"""
Settings - ceilings and retry caps shared by every module
Loaded from defaults, an optional YAML file and explicit flag overrides.
No environment variables are consulted: runs are reproducible from flags alone.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field

from errors import ParameterError

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    # Products of two sieved primes must fit in uint64
    sieve_ceiling: int = Field(default=26, ge=2, le=26)
    # Character tables hold 2^(n-1) complex entries
    charsum_ceiling: int = Field(default=22, ge=3, le=32)
    miller_rabin_rounds: int = Field(default=64, ge=1)
    sample_attempt_factor: int = Field(default=100, ge=1)
    round_factor: int = Field(default=64, ge=1)
    counts_summary_threshold: int = Field(default=2**16, ge=1)

    def sample_attempt_cap(self, n: int) -> int:
        return self.sample_attempt_factor * n * n

    def max_rounds(self, n: int) -> int:
        return self.round_factor * n

    def update(self, **overrides) -> "Settings":
        """
        Apply overrides in place, skipping None values

        Args:
            **overrides: field name -> new value

        Returns:
            self, for chaining
        """
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in type(self).model_fields:
                raise ParameterError(f"unknown setting: {key}")
            setattr(self, key, value)
        return self


def load_settings_file(path: Union[str, Path]) -> dict:
    """
    Read a YAML settings file

    Args:
        path: YAML file with top-level keys named like Settings fields

    Returns:
        Mapping of overrides (empty for an empty file)
    """
    path = Path(path)
    if not path.exists():
        raise ParameterError(f"config file not found: {path}")

    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}

    if not isinstance(data, dict):
        raise ParameterError(f"config file {path} must hold a mapping")
    logger.debug("📄 Loaded settings from %s: %s", path, sorted(data))
    return data


def configure(config_path: Optional[Union[str, Path]] = None, **overrides) -> Settings:
    """
    Reset the global settings to defaults, then apply file and flag overrides

    Args:
        config_path: Optional YAML file
        **overrides: Explicit values (flags); None means "not given"

    Returns:
        The global Settings instance
    """
    fresh = Settings()
    if config_path is not None:
        try:
            fresh = Settings(**load_settings_file(config_path))
        except ValueError as e:
            if isinstance(e, ParameterError):
                raise
            raise ParameterError(f"invalid config file {config_path}: {e}") from e

    try:
        for key in type(fresh).model_fields:
            setattr(settings, key, getattr(fresh, key))
        settings.update(**overrides)
    except ValueError as e:
        if isinstance(e, ParameterError):
            raise
        raise ParameterError(f"invalid setting: {e}") from e
    return settings


# Global instance
settings = Settings()
