"""Scenario catalog, config format, runner, and report emission."""

from .catalog import CONTRASTS, builtin_catalog, catalog_by_id, get_scenario
from .config import ConfigError, ScenarioConfig, load, loads
from .runner import ScenarioReport, run_scenario
from .verify import verify_all

__all__ = [
    "CONTRASTS",
    "ConfigError",
    "ScenarioConfig",
    "ScenarioReport",
    "builtin_catalog",
    "catalog_by_id",
    "get_scenario",
    "load",
    "loads",
    "run_scenario",
    "verify_all",
]
