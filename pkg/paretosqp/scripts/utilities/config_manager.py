#!/usr/bin/env python3
"""
Solver Configuration Manager
Loads solver defaults and per-problem overrides from solver_config.yaml (or .json)
"""

import json
import os
import re
import logging
from typing import Dict, Any, Optional
from pathlib import Path

import yaml

from .constants import DEFAULT_CONFIG_FILENAMES

# Configure logging
logger = logging.getLogger(__name__)

# Keys of a problems.<name> section that configure the problem, not the solver
PROBLEM_KEYS = {"dimension"}


class ConfigError(ValueError):
    """Raised when the configuration file is malformed"""

    pass


class ConfigManager:
    """Manages solver configuration and per-problem overrides

    The file is optional: without one every accessor returns empty overrides.
    """

    def __init__(self, config_path: Optional[str] = None):
        """Initialize configuration manager

        Args:
            config_path: Path to solver_config.yaml; searched for in the working
                directory and its parents when omitted
        """
        if config_path is None:
            config_path = self._find_config_file(Path.cwd())
        elif not Path(config_path).exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        self.config_path = Path(config_path) if config_path else None
        self.config = self._load_config()
        self._validate_config()

    def _find_config_file(self, start_path: Path) -> Optional[str]:
        """Find solver_config.* in current or parent directories"""
        for path in [start_path] + list(start_path.parents):
            for name in DEFAULT_CONFIG_FILENAMES:
                config_file = path / name
                if config_file.exists():
                    return str(config_file)
        return None

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, substituting ${VAR} references first"""
        if self.config_path is None:
            logger.debug("No solver configuration file found, using built-in defaults")
            return {}

        try:
            text = self._substitute_env_vars(self.config_path.read_text())
            if self.config_path.suffix == ".json":
                config = json.loads(text)
            else:
                config = yaml.safe_load(text)
        except (json.JSONDecodeError, yaml.YAMLError, IOError) as e:
            raise ConfigError(f"Failed to load configuration {self.config_path}: {e}")

        if config is None:
            config = {}
        if not isinstance(config, dict):
            raise ConfigError(f"{self.config_path} must contain a mapping at top level")
        logger.info(f"Loaded solver configuration from {self.config_path}")
        return config

    def _substitute_env_vars(self, text: str) -> str:
        """Replace ${VAR_NAME} patterns with environment variables"""

        def replace_env_var(match):
            var_name = match.group(1)
            return os.getenv(var_name, match.group(0))  # Return original if not found

        return re.sub(r"\$\{([^}]+)\}", replace_env_var, text)

    def _validate_config(self):
        """Validate required configuration sections"""
        if not self.config:
            return
        if "solver" not in self.config:
            raise ConfigError("Required configuration section 'solver' not found")
        for section in ("solver", "problems"):
            value = self.config.get(section)
            if value is not None and not isinstance(value, dict):
                raise ConfigError(f"Configuration section '{section}' must be a mapping")
        for name, overrides in (self.config.get("problems") or {}).items():
            if overrides is not None and not isinstance(overrides, dict):
                raise ConfigError(f"Overrides for problem '{name}' must be a mapping")

    def _problem_section(self, problem_name: Optional[str]) -> Dict[str, Any]:
        if not problem_name:
            return {}
        problems = self.config.get("problems") or {}
        return problems.get(problem_name.lower()) or {}

    def get_solver_overrides(self, problem_name: Optional[str] = None) -> Dict[str, Any]:
        """Solver section merged with the problem's own overrides

        Args:
            problem_name: Benchmark whose problems.<name> section applies

        Returns:
            Key-value overrides for SolverConfig.from_overrides
        """
        overrides = dict(self.config.get("solver") or {})
        for key, value in self._problem_section(problem_name).items():
            if key not in PROBLEM_KEYS:
                overrides[key] = value
        return overrides

    def get_problem_dimension(self, problem_name: str) -> Optional[int]:
        """Decision dimension configured for a benchmark, if any"""
        value = self._problem_section(problem_name).get("dimension")
        if value is None:
            return None
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"Dimension for '{problem_name}' must be an integer, got {value!r}")
