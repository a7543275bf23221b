# Rule-based EMS decision engine: four cases, six operating modes

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.profiles.timeseries import TimeSeriesProfile

logger = logging.getLogger(__name__)

PV_ZERO_EPSILON_KW = 1e-6


class PreconditionError(ValueError):
    """Raised when an EMS equation is evaluated outside its case."""


class Mode(str, Enum):
    """
    Operating modes of the EMS.

    M1  surplus PV exported, battery idle
    M2  surplus PV charges the battery
    M3  grid covers the deficit
    M4  battery covers the deficit
    M5  no PV, battery idle, grid serves the load
    M6  no PV, battery charges from the grid
    """

    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    M5 = "M5"
    M6 = "M6"

    def __str__(self) -> str:
        return self.value


CASE_MODES = {
    1: (Mode.M1, Mode.M2),
    2: (Mode.M3, Mode.M4),
    3: (Mode.M5, Mode.M6),
    4: (Mode.M5, Mode.M6),
}


@dataclass(frozen=True)
class DecisionInputs:
    p_pv: float
    p_load: float
    ev_connected: bool
    ev_soc: float
    p_ev_request: float
    tariff: float
    fit: float
    battery_soc: float
    tariff_is_lowest: bool
    forecast_ok: bool

    def __post_init__(self):
        for name in ("p_pv", "p_load", "p_ev_request", "tariff", "fit"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("ev_soc", "battery_soc"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class Decision:
    case_id: int
    mode: Mode
    p_l_total: float
    p_r: float = 0.0
    p_d: float = 0.0

    def __post_init__(self):
        if self.mode not in CASE_MODES[self.case_id]:
            raise ValueError(f"mode {self.mode} is not reachable from case {self.case_id}")
        if self.p_r < 0 or self.p_d < 0 or (self.p_r > 0 and self.p_d > 0):
            raise ValueError("at most one of p_r, p_d may be non-zero and both must be non-negative")


def total_load_power(
    p_load: float,
    ev_connected: bool,
    ev_soc: float,
    ev_soc_max: float,
    p_ev_request: float,
) -> float:
    """
    Household load plus the EV draw while the EV is plugged in and below its ceiling

    The EV is always added to the load, never subtracted.

    Args:
        p_load: Household load (kW)
        ev_connected: Whether the EV is plugged in
        ev_soc: EV state of charge (fraction)
        ev_soc_max: EV charging ceiling (fraction)
        p_ev_request: Charging power the EV asks for (kW)

    Returns:
        Total load power in kW
    """
    if ev_connected and ev_soc < ev_soc_max:
        return p_load + p_ev_request
    return p_load


def remaining_power(p_pv: float, p_l_total: float) -> float:
    """PV surplus above the total load (case 1 only)."""
    if not p_pv > p_l_total:
        raise PreconditionError(f"remaining power needs p_pv > p_l_total, got {p_pv} <= {p_l_total}")
    return p_pv - p_l_total


def demanding_power(p_l_total: float, p_pv: float) -> float:
    """Load deficit PV cannot cover (case 2 only)."""
    if p_pv > p_l_total:
        raise PreconditionError(f"demanding power needs p_pv <= p_l_total, got {p_pv} > {p_l_total}")
    return p_l_total - p_pv


def classify_case(
    p_pv: float,
    p_l_total: float,
    tariff_is_lowest: bool,
    pv_zero_epsilon: float = PV_ZERO_EPSILON_KW,
) -> int:
    if p_pv <= pv_zero_epsilon:
        return 4 if tariff_is_lowest else 3
    if p_pv > p_l_total:
        return 1
    # exact balance belongs to case 2 with a zero deficit
    return 2


def decide_mode(
    inputs: DecisionInputs,
    soc_min: float,
    soc_max: float,
    ev_soc_max: float = 1.0,
    pv_zero_epsilon: float = PV_ZERO_EPSILON_KW,
) -> Decision:
    """
    Classify the step and pick the operating mode

    Args:
        inputs: Measured and forecast quantities for this step
        soc_min: Battery SoC floor
        soc_max: Battery SoC ceiling
        ev_soc_max: EV charging ceiling used for the total load
        pv_zero_epsilon: PV power treated as "no generation" (kW)

    Returns:
        Decision with case, mode and the equation outputs
    """
    p_l_total = total_load_power(
        inputs.p_load, inputs.ev_connected, inputs.ev_soc, ev_soc_max, inputs.p_ev_request
    )
    case_id = classify_case(inputs.p_pv, p_l_total, inputs.tariff_is_lowest, pv_zero_epsilon)
    cheap = inputs.tariff < inputs.fit
    can_charge = inputs.battery_soc < soc_max

    if case_id == 1:
        p_r = remaining_power(inputs.p_pv, p_l_total)
        mode = Mode.M2 if can_charge and cheap else Mode.M1
        decision = Decision(case_id, mode, p_l_total, p_r=p_r)
    elif case_id == 2:
        p_d = demanding_power(p_l_total, inputs.p_pv)
        if cheap:
            mode = Mode.M3
        elif inputs.battery_soc > soc_min:
            mode = Mode.M4
        else:
            # depleted battery at a high tariff: the grid still has to serve the load
            mode = Mode.M3
        decision = Decision(case_id, mode, p_l_total, p_d=p_d)
    elif case_id == 3:
        mode = Mode.M6 if cheap and can_charge else Mode.M5
        decision = Decision(case_id, mode, p_l_total)
    else:
        if inputs.forecast_ok:
            mode = Mode.M5
        else:
            mode = Mode.M6 if can_charge else Mode.M5
        decision = Decision(case_id, mode, p_l_total)

    logger.debug(f"case {decision.case_id} -> {decision.mode} (P_L_total={p_l_total:.3f} kW)")
    return decision


def forecast_sufficient(
    forecast_pv: TimeSeriesProfile,
    forecast_load: TimeSeriesProfile,
    battery_headroom_energy: float,
) -> bool:
    """
    Whether next-day PV surplus can refill the battery without the grid

    Only hours where forecast PV exceeds forecast load contribute.

    Args:
        forecast_pv: Next-day PV power forecast (kW)
        forecast_load: Next-day load forecast (kW)
        battery_headroom_energy: Energy needed to fill the battery (kWh)

    Returns:
        True when the summed hourly surplus energy covers the headroom
    """
    if len(forecast_pv) != len(forecast_load):
        raise ValueError(
            f"forecast lengths differ: {len(forecast_pv)} PV samples vs {len(forecast_load)} load samples"
        )
    surplus = np.maximum(forecast_pv.values - forecast_load.values, 0.0)
    surplus_energy = float(np.sum(surplus)) * forecast_pv.dt_hours
    return surplus_energy >= battery_headroom_energy
