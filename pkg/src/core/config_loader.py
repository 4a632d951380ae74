"""
Configuration Loader for YAML-based profiles.

A profile fixes the field (q, zeta), the mode and reduction point, and the
run settings of the verification and enumeration commands. Profiles may
`extends:` another profile; values of the form ${VAR} are read from the
environment (a .env file is honoured).
"""

import dataclasses
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv

from src.drinfeld.errors import ConfigError

load_dotenv()

logger = logging.getLogger(__name__)

# Element values are literal strings ("1+2*g", "1+2i") or ascending coefficient lists.
ElementValue = str | list[int] | int | None


# =============================================================================
# Data Classes
# =============================================================================


@dataclass
class FieldConfig:
    """The constant field F_q, q = p^q_exponent, and the choice of zeta."""
    p: int = 3
    q_exponent: int = 1
    zeta: ElementValue = None
    zeta_modulus: list[int] | None = None

    @property
    def q(self) -> int:
        return self.p**self.q_exponent


@dataclass
class ParamsConfig:
    mode: str = "reduced"
    eta: ElementValue = None
    t_point: ElementValue = None
    nu_index: int = 0


@dataclass
class VerificationConfig:
    """Sampling for the verification suites."""
    seed: int = 7
    specializations: int = 20
    max_attempts: int = 200


@dataclass
class EnumerationConfig:
    k_max: int = 3
    workers: int | None = None


@dataclass
class OutputConfig:
    format: str = "json"
    directory: str = "runs"


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = "INFO"
    file: str | None = None


@dataclass
class ProfileConfig:
    """Complete configuration profile."""
    profile_name: str = "Default Profile"
    description: str = ""
    field: FieldConfig = dataclasses.field(default_factory=FieldConfig)
    params: ParamsConfig = dataclasses.field(default_factory=ParamsConfig)
    verification: VerificationConfig = dataclasses.field(default_factory=VerificationConfig)
    enumeration: EnumerationConfig = dataclasses.field(default_factory=EnumerationConfig)
    output: OutputConfig = dataclasses.field(default_factory=OutputConfig)
    logging: LoggingConfig = dataclasses.field(default_factory=LoggingConfig)


# =============================================================================
# Config Loader
# =============================================================================


class ConfigLoader:
    """Loads and validates YAML configuration profiles."""

    FORMATS = {"json", "csv"}
    MODES = {"reduced", "specialized"}

    def __init__(self, config_dir: Path | None = None):
        """
        Initialize the config loader.

        Args:
            config_dir: Directory containing config files. Defaults to configs/
        """
        self.config_dir = config_dir or Path("configs")

    def load(self, path: str | Path) -> ProfileConfig:
        """
        Load a configuration profile from a YAML file.

        Args:
            path: Path to the YAML file (absolute, relative to CWD, or relative to config_dir)

        Returns:
            Parsed ProfileConfig

        Raises:
            FileNotFoundError: If config file doesn't exist
            ConfigError: If a value is outside its domain (the message names the field)
        """
        return self._parse_config(self.load_raw(path))

    def load_raw(self, path: str | Path) -> dict[str, Any]:
        """The merged, env-substituted dict behind a profile."""
        config_path = Path(path)
        if not config_path.is_absolute() and not config_path.exists():
            potential_path = self.config_dir / config_path
            if potential_path.exists():
                config_path = potential_path

        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")

        with open(config_path, "r") as f:
            raw_config = yaml.safe_load(f) or {}

        if "extends" in raw_config:
            base_path = raw_config.pop("extends")
            sibling = config_path.parent / base_path
            base_raw = self.load_raw(sibling if sibling.exists() else base_path)
            raw_config = self._merge_configs(base_raw, raw_config)

        return self._substitute_env_vars(raw_config)

    def _parse_config(self, raw: dict[str, Any]) -> ProfileConfig:
        """Parse raw YAML dict into ProfileConfig dataclass."""
        config = ProfileConfig(
            profile_name=raw.get("profile_name", "Default Profile"),
            description=raw.get("description", ""),
            field=self._section(FieldConfig, raw, "field"),
            params=self._section(ParamsConfig, raw, "params"),
            verification=self._section(VerificationConfig, raw, "verification"),
            enumeration=self._section(EnumerationConfig, raw, "enumeration"),
            output=self._section(OutputConfig, raw, "output"),
            logging=self._section(LoggingConfig, raw, "logging"),
        )
        if env_workers := os.getenv("TOWER_WORKERS"):
            config.enumeration.workers = self._int("enumeration.workers", env_workers)
        self.validate(config)
        return config

    def _section(self, cls, raw: dict[str, Any], name: str):
        values = raw.get(name) or {}
        if not isinstance(values, dict):
            raise ConfigError(f"section must be a mapping (field: {name})")
        known = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in values.items():
            if key not in known:
                logger.warning(f"Unknown key '{name}.{key}' ignored")
                continue
            ftype = known[key].type
            if ftype is int or (ftype == (int | None) and value is not None):
                value = self._int(f"{name}.{key}", value)
            kwargs[key] = value
        return cls(**kwargs)

    @staticmethod
    def _int(name: str, value: Any) -> int:
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"expected an integer, got {value!r} (field: {name})") from None

    def validate(self, config: ProfileConfig) -> None:
        """
        Raises:
            ConfigError: naming the first offending field
        """
        if config.field.p < 2 or config.field.q_exponent < 1:
            raise ConfigError(f"q = {config.field.p}^{config.field.q_exponent} is not a prime power (field: field.p)")
        if config.params.mode not in self.MODES:
            raise ConfigError(f"mode must be one of {sorted(self.MODES)}, got {config.params.mode!r} (field: params.mode)")
        if config.output.format not in self.FORMATS:
            raise ConfigError(f"format must be one of {sorted(self.FORMATS)}, got {config.output.format!r} (field: output.format)")
        if config.enumeration.k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {config.enumeration.k_max} (field: enumeration.k_max)")
        if config.verification.specializations < 1:
            raise ConfigError("specializations must be >= 1 (field: verification.specializations)")
        if config.enumeration.workers is not None and config.enumeration.workers < 1:
            raise ConfigError("workers must be >= 1 (field: enumeration.workers)")

    def _substitute_env_vars(self, config: Any) -> Any:
        """Recursively substitute ${VAR} patterns with environment variables."""
        if isinstance(config, str):
            if config.startswith("${") and config.endswith("}"):
                var_name = config[2:-1]
                value = os.getenv(var_name)
                if value is None:
                    logger.warning(f"Environment variable {var_name} not found")
                    return config
                return value
            return config
        elif isinstance(config, dict):
            return {k: self._substitute_env_vars(v) for k, v in config.items()}
        elif isinstance(config, list):
            return [self._substitute_env_vars(item) for item in config]
        return config

    def _merge_configs(
        self,
        base: dict[str, Any],
        override: dict[str, Any]
    ) -> dict[str, Any]:
        """Deep merge override config into base config."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_configs(result[key], value)
            else:
                result[key] = value

        return result


# =============================================================================
# Helper Functions
# =============================================================================


def load_profile(path: str | Path) -> ProfileConfig:
    """
    Convenience function to load a configuration profile.

    Args:
        path: Path to the YAML configuration file

    Returns:
        Parsed ProfileConfig
    """
    loader = ConfigLoader()
    return loader.load(path)


def profile_to_dict(config: ProfileConfig) -> dict[str, Any]:
    """Plain dict of a profile (used for digests and artifacts)."""
    return dataclasses.asdict(config)
