# Electrical layer: dq current control of the PV and battery inverters

from src.electrical.controller import (
    DegenerateVoltageError,
    PiGains,
    controller_step,
    current_refs,
    dq_power,
    prefilter_step,
    tune_pi,
)
from src.electrical.plant import plant_step, rk4_step
from src.electrical.pll import PllGains, pll_gains, pll_lock_time, pll_step, run_pll
from src.electrical.state import MAX_STEP_SECONDS, DqSimState, NumericalDivergenceError
from src.electrical.tracking import (
    SetpointReport,
    StepMetrics,
    TrackingTrace,
    check_dispatch_setpoints,
    run_tracking_sim,
    step_metrics,
    write_waveform_csv,
)
from src.electrical.transforms import balanced_set, inverse_park, park_transform

__all__ = [
    "MAX_STEP_SECONDS",
    "DegenerateVoltageError",
    "DqSimState",
    "NumericalDivergenceError",
    "PiGains",
    "PllGains",
    "SetpointReport",
    "StepMetrics",
    "TrackingTrace",
    "balanced_set",
    "check_dispatch_setpoints",
    "controller_step",
    "current_refs",
    "dq_power",
    "inverse_park",
    "park_transform",
    "pll_gains",
    "pll_lock_time",
    "pll_step",
    "plant_step",
    "prefilter_step",
    "rk4_step",
    "run_pll",
    "run_tracking_sim",
    "step_metrics",
    "tune_pi",
    "write_waveform_csv",
]
