"""flownet.config - configuration parsing and management."""

from flownet.config.defaults import get_default_config, merge_configs
from flownet.config.parser import ConfigParser, apply_env_overrides, load_config
from flownet.config.schema import (
    CoverConfig,
    FlownetConfig,
    IntegratorDefaults,
    ToleranceConfig,
)

__all__ = [
    "ConfigParser",
    "CoverConfig",
    "FlownetConfig",
    "IntegratorDefaults",
    "ToleranceConfig",
    "apply_env_overrides",
    "get_default_config",
    "load_config",
    "merge_configs",
]
