"""Parser for .flownet.yml configuration files."""

from __future__ import annotations

import logging
import os
import re
from collections.abc import Mapping
from dataclasses import fields
from typing import Any

import yaml

from flownet.config.schema import (
    CoverConfig,
    FlownetConfig,
    IntegratorDefaults,
    ToleranceConfig,
)

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

DEFAULT_CONFIG_FILE = ".flownet.yml"

# Environment variables that override individual tolerances
ENV_OVERRIDES: dict[str, str] = {
    "FLOWNET_TOL_CONSENSUS": "consensus",
    "FLOWNET_TOL_STEADY": "steady_rate",
}

_ENV_VAR_PATTERN: re.Pattern[str] = re.compile(r"\$\{([^}]+)\}")

_SECTIONS: dict[str, type] = {
    "tolerances": ToleranceConfig,
    "integrator": IntegratorDefaults,
    "cover": CoverConfig,
}


class ConfigParser:
    """Parses .flownet.yml configuration files into FlownetConfig objects."""

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def parse(self, content: str) -> FlownetConfig:
        """Parse YAML string content into a FlownetConfig.

        Args:
            content: Raw YAML text.

        Returns:
            Hydrated FlownetConfig; an empty document yields the defaults.

        Raises:
            TypeError: If ``content`` is not a string.
            ValueError: If the YAML is invalid or a value has the wrong type.
        """
        if content is None:
            raise TypeError("content must be a string, not None")

        try:
            data: Any = yaml.safe_load(content)
        except yaml.YAMLError as exc:
            raise ValueError(f"Invalid YAML: {exc}") from exc

        if data is None:
            return FlownetConfig()

        if not isinstance(data, dict):
            raise ValueError("Invalid YAML: top-level value must be a mapping")

        return self._build_config(data)

    def parse_file(self, file_path: str) -> FlownetConfig:
        """Parse a configuration file from disk.

        Raises:
            FileNotFoundError: If the file does not exist.
            ValueError: If the YAML is invalid.
        """
        with open(file_path, encoding="utf-8") as fh:
            return self.parse(fh.read())

    def resolve_env_vars(self, value: str) -> str:
        """Resolve ``${VAR}`` and ``${VAR:-default}`` patterns.

        Unknown variables with no default expand to an empty string.
        """

        def _replace(match: re.Match[str]) -> str:
            spec = match.group(1)
            if ":-" in spec:
                var_name, default = spec.split(":-", 1)
                return os.environ.get(var_name.strip(), default)
            return os.environ.get(spec.strip(), "")

        return _ENV_VAR_PATTERN.sub(_replace, value)

    def validate(self, config: FlownetConfig) -> list[str]:
        """Validate a parsed config.

        Returns:
            List of human-readable error messages.  Empty list means valid.
        """
        errors: list[str] = []
        for f in fields(config.tolerances):
            value = getattr(config.tolerances, f.name)
            if not value > 0:
                errors.append(f"tolerances.{f.name} must be positive, got {value}")
        if not config.integrator.step > 0:
            errors.append(f"integrator.step must be positive, got {config.integrator.step}")
        if config.integrator.horizon < 0:
            errors.append(
                f"integrator.horizon must be non-negative, got {config.integrator.horizon}"
            )
        if config.integrator.stride < 1:
            errors.append(f"integrator.stride must be at least 1, got {config.integrator.stride}")
        if config.cover.exact_max_edges < 1:
            errors.append("cover.exact_max_edges must be at least 1")
        if config.cover.brute_force_max_bidirectional < 0:
            errors.append("cover.brute_force_max_bidirectional must be non-negative")
        return errors

    # ------------------------------------------------------------------
    # Private parsing helpers
    # ------------------------------------------------------------------

    def _build_config(self, data: dict) -> FlownetConfig:
        """Assemble a FlownetConfig from a parsed YAML dict."""
        unknown = sorted(set(data) - set(_SECTIONS))
        if unknown:
            raise ValueError(f"Unknown configuration sections: {unknown}")
        sections = {
            name: self._parse_section(name, cls, data.get(name) or {})
            for name, cls in _SECTIONS.items()
        }
        return FlownetConfig(**sections)

    def _parse_section(self, name: str, cls: type, data: Any) -> Any:
        """Parse one section into its dataclass, coercing to the field types."""
        if not isinstance(data, dict):
            raise ValueError(f"Section '{name}' must be a mapping")
        defaults = cls()
        kwargs: dict[str, Any] = {}
        known = {f.name for f in fields(cls)}
        for key, raw in data.items():
            if key not in known:
                raise ValueError(f"Unknown key '{name}.{key}'")
            if isinstance(raw, str):
                raw = self.resolve_env_vars(raw)
            kwargs[key] = _coerce(f"{name}.{key}", raw, type(getattr(defaults, key)))
        return cls(**kwargs)


# ---------------------------------------------------------------------------
# Module-level helpers
# ---------------------------------------------------------------------------


def _coerce(path: str, raw: Any, target: type) -> Any:
    """Convert *raw* to ``int`` or ``float``, naming *path* on failure."""
    try:
        if target is int:
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError
            return int(raw)
        return float(raw)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"'{path}' must be a {target.__name__}, got {raw!r}") from exc


def apply_env_overrides(
    config: FlownetConfig,
    environ: Mapping[str, str] | None = None,
) -> FlownetConfig:
    """Apply ``FLOWNET_TOL_*`` environment overrides in place and return *config*.

    Raises:
        ValueError: If an override is not a number.
    """
    env = os.environ if environ is None else environ
    for var, attr in ENV_OVERRIDES.items():
        raw = env.get(var)
        if raw is None or raw == "":
            continue
        value = _coerce(var, raw, float)
        logger.debug("Tolerance %s overridden by %s=%s", attr, var, value)
        setattr(config.tolerances, attr, value)
    return config


def load_config(
    path: str | None = None,
    environ: Mapping[str, str] | None = None,
) -> FlownetConfig:
    """Load configuration from *path* (or ``.flownet.yml`` if present) plus env overrides."""
    parser = ConfigParser()
    if path is not None:
        config = parser.parse_file(path)
    elif os.path.exists(DEFAULT_CONFIG_FILE):
        logger.info("Loading configuration from %s", DEFAULT_CONFIG_FILE)
        config = parser.parse_file(DEFAULT_CONFIG_FILE)
    else:
        config = FlownetConfig()
    config = apply_env_overrides(config, environ)
    errors = parser.validate(config)
    if errors:
        raise ValueError("Invalid configuration: " + "; ".join(errors))
    return config
