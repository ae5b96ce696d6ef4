"""Default configuration factory and merge helper for flownet."""

from __future__ import annotations

import copy
from dataclasses import fields

from flownet.config.schema import (
    CoverConfig,
    FlownetConfig,
    IntegratorDefaults,
    ToleranceConfig,
)


def get_default_config() -> FlownetConfig:
    """Return a FlownetConfig with every default populated."""
    return FlownetConfig(
        tolerances=ToleranceConfig(),
        integrator=IntegratorDefaults(),
        cover=CoverConfig(),
    )


def merge_configs(base: FlownetConfig, override: FlownetConfig) -> FlownetConfig:
    """Merge two configs; fields of *override* that differ from the defaults win.

    The originals are never mutated.

    Args:
        base: Base configuration (lower precedence).
        override: Overriding configuration (higher precedence).

    Returns:
        New FlownetConfig that is the merge of *base* and *override*.
    """
    merged = copy.deepcopy(base)
    defaults = get_default_config()
    for section_name in ("tolerances", "integrator", "cover"):
        merged_section = getattr(merged, section_name)
        override_section = getattr(override, section_name)
        default_section = getattr(defaults, section_name)
        for f in fields(override_section):
            value = getattr(override_section, f.name)
            if value != getattr(default_section, f.name):
                setattr(merged_section, f.name, value)
    return merged
