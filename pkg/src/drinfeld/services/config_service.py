"""
Configuration Service.

Lists, loads and summarizes the YAML profiles in configs/.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from src.core.config_loader import ConfigLoader, ProfileConfig
from src.drinfeld.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class ProfileSummary:
    """What a profile fixes, without building any field."""
    name: str
    description: str
    q: int
    mode: str
    zeta: str
    eta: str
    k_max: int
    seed: int

    def to_row(self) -> list:
        return [self.name, self.q, self.mode, self.zeta, self.eta, self.k_max, self.seed, self.description]


class ConfigService:
    """
    Service for managing configuration profiles.

    Provides a clean interface for:
    - Listing available profiles
    - Loading a profile by name or path
    - Validating profiles
    """

    def __init__(self, configs_dir: Path | str = Path("configs")):
        self.configs_dir = Path(configs_dir)
        self._loader = ConfigLoader(config_dir=self.configs_dir)

    def list_profiles(self) -> list[ProfileSummary]:
        profiles = []
        if not self.configs_dir.exists():
            logger.warning(f"Configs directory does not exist: {self.configs_dir}")
            return profiles

        for yaml_file in sorted(self.configs_dir.glob("*.yaml")):
            try:
                profiles.append(self.summarize(yaml_file.stem, self._loader.load(yaml_file)))
            except (ConfigError, ValueError) as e:
                logger.warning(f"Failed to parse {yaml_file.name}: {e}")
        return profiles

    @staticmethod
    def summarize(name: str, config: ProfileConfig) -> ProfileSummary:
        return ProfileSummary(
            name=name,
            description=config.description,
            q=config.field.q,
            mode=config.params.mode,
            zeta=str(config.field.zeta if config.field.zeta is not None else "g"),
            eta=str(config.params.eta if config.params.eta is not None else "(default)"),
            k_max=config.enumeration.k_max,
            seed=config.verification.seed,
        )

    def get_profile_names(self) -> list[str]:
        if not self.configs_dir.exists():
            return []
        return [f.stem for f in sorted(self.configs_dir.glob("*.yaml"))]

    def load_profile(self, name: str | Path | None) -> ProfileConfig:
        """
        Load a profile by name, by path, or the defaults when name is None.

        Raises:
            FileNotFoundError: If the profile doesn't exist
            ConfigError: If the profile is invalid
        """
        if name is None:
            base = self.configs_dir / "base.yaml"
            return self._loader.load(base) if base.exists() else ProfileConfig()
        path = Path(name)
        if path.suffix != ".yaml":
            path = self.configs_dir / f"{name}.yaml"
        return self._loader.load(path)

    def validate_profile(self, name: str) -> list[str]:
        """Errors found while loading a profile (empty when it is valid)."""
        try:
            self.load_profile(name)
        except FileNotFoundError:
            return [f"Profile not found: {name}"]
        except ConfigError as e:
            return [str(e)]
        return []

    def validate(self, config: ProfileConfig) -> None:
        """Re-validate a profile after command-line overrides."""
        self._loader.validate(config)

    def profile_exists(self, name: str) -> bool:
        if name.endswith(".yaml"):
            name = name[:-5]
        return (self.configs_dir / f"{name}.yaml").exists()
