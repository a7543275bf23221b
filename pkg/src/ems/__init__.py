# Energy management decision engine

from src.ems.decision import (
    CASE_MODES,
    Decision,
    DecisionInputs,
    Mode,
    PreconditionError,
    classify_case,
    decide_mode,
    demanding_power,
    forecast_sufficient,
    remaining_power,
    total_load_power,
)

__all__ = [
    "CASE_MODES",
    "Decision",
    "DecisionInputs",
    "Mode",
    "PreconditionError",
    "classify_case",
    "decide_mode",
    "demanding_power",
    "forecast_sufficient",
    "remaining_power",
    "total_load_power",
]
