"""
Configuration Manager for anyonwalk

Handles loading and merging of run configuration from:
1. Built-in defaults
2. The user's .anyonwalk.yaml file (or --config PATH)
3. Explicit CLI flags
"""

import logging
import os
from typing import Any, Dict, Optional

import yaml
from pydantic import ValidationError

from anyonwalk.config.models import RunConfig, _deep_merge
from anyonwalk.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = ".anyonwalk.yaml"


class ConfigManager:
    """Manages anyonwalk run configuration."""

    DEFAULT_CONFIG: Dict[str, Any] = RunConfig().to_dict()

    def __init__(self, config_path: Optional[str] = None):
        self.explicit = config_path is not None
        self.config_path = config_path or DEFAULT_CONFIG_FILE
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load the file and merge it over the defaults."""
        config = dict(self.DEFAULT_CONFIG)

        if not os.path.exists(self.config_path):
            if self.explicit:
                raise ConfigurationError(
                    f"Configuration file not found: {self.config_path}",
                    config_path=self.config_path,
                )
            return config

        try:
            with open(self.config_path, "r") as f:
                user_config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Malformed YAML: {e}", config_path=self.config_path
            ) from e

        if user_config is None:
            return config
        if not isinstance(user_config, dict):
            raise ConfigurationError(
                "Configuration file must hold a mapping", config_path=self.config_path
            )
        logger.debug("Loaded configuration from %s", self.config_path)
        return _deep_merge(config, user_config)

    def build(self, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """
        Validate file settings with CLI ``overrides`` (None values ignored) on top.

        Raises:
            ConfigurationError: if the merged settings do not validate
        """
        flags = {k: v for k, v in (overrides or {}).items() if v is not None}
        disorder = {k: v for k, v in flags.pop("disorder", {}).items() if v is not None}
        if disorder:
            flags["disorder"] = disorder
        merged = _deep_merge(self.config, flags)
        try:
            return RunConfig.from_dict(merged)
        except ValidationError as e:
            first = e.errors()[0]
            key = ".".join(str(part) for part in first.get("loc", ())) or None
            raise ConfigurationError(
                f"Invalid run configuration: {first.get('msg')}",
                config_path=self.config_path if os.path.exists(self.config_path) else None,
                invalid_key=key,
                details={"errors": len(e.errors())},
            ) from e

    def get(self, key: str, default: Any = None) -> Any:
        return self.config.get(key, default)
