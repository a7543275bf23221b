# Time series profiles and scenario files

from src.profiles.scenario import (
    COLUMNS,
    Scenario,
    ScenarioError,
    Violation,
    load_scenario,
    parse_scenario,
    read_scenario_text,
    serialize_scenario,
    validate_scenario_text,
    with_ev_disconnected,
    with_pv_scaled,
)
from src.profiles.timeseries import TimeSeriesProfile, sample, tariff_is_lowest

__all__ = [
    "COLUMNS",
    "Scenario",
    "ScenarioError",
    "TimeSeriesProfile",
    "Violation",
    "load_scenario",
    "parse_scenario",
    "read_scenario_text",
    "sample",
    "serialize_scenario",
    "tariff_is_lowest",
    "validate_scenario_text",
    "with_ev_disconnected",
    "with_pv_scaled",
]
