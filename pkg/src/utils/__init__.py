# Utilities module
from src.utils.config import (
    BatteryConfig,
    ConfigError,
    ControlConfig,
    ElectricalConfig,
    EvConfig,
    FilterParams,
    GridParams,
    MicrogridConfig,
    SimulatorConfig,
    load_config,
    parse_key_value_overrides,
)

__all__ = [
    "BatteryConfig",
    "ConfigError",
    "ControlConfig",
    "ElectricalConfig",
    "EvConfig",
    "FilterParams",
    "GridParams",
    "MicrogridConfig",
    "SimulatorConfig",
    "load_config",
    "parse_key_value_overrides",
]
