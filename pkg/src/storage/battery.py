# Battery state-of-charge model with clamp-and-report power limits

from dataclasses import dataclass
from typing import Tuple

from src.utils.config import BatteryConfig


@dataclass
class BatteryState:
    soc: float

    @classmethod
    def initial(cls, config: BatteryConfig) -> "BatteryState":
        return cls(soc=config.initial_soc)


def max_charge_power(state: BatteryState, config: BatteryConfig, dt_hours: float) -> float:
    """Largest grid/PV-side charging power (kW) that keeps SoC at or below soc_max."""
    headroom_rate = max(config.soc_max - state.soc, 0.0) * config.capacity_kwh / (config.eta_charge * dt_hours)
    return min(config.p_charge_max_kw, headroom_rate)


def max_discharge_power(state: BatteryState, config: BatteryConfig, dt_hours: float) -> float:
    """Largest AC-side discharge power (kW) that keeps SoC at or above soc_min."""
    available_rate = max(state.soc - config.soc_min, 0.0) * config.capacity_kwh * config.eta_discharge / dt_hours
    return min(config.p_discharge_max_kw, available_rate)


def step_battery(
    state: BatteryState,
    config: BatteryConfig,
    p_command_kw: float,
    dt_hours: float,
) -> Tuple[BatteryState, float]:
    """
    Apply a power command for one step, clamped to what the battery allows

    Args:
        state: SoC before the step
        config: Battery ratings and limits
        p_command_kw: Requested power, positive discharges and negative charges
        dt_hours: Step length in hours

    Returns:
        Tuple of (new state, achieved power with the command's sign convention)
    """
    if not dt_hours > 0:
        raise ValueError(f"dt_hours must be positive, got {dt_hours}")

    if p_command_kw < 0:
        limit = max_charge_power(state, config, dt_hours)
        p_charge = min(-p_command_kw, limit)
        if p_charge <= 0:
            return BatteryState(state.soc), 0.0
        if p_charge == limit and limit < config.p_charge_max_kw:
            # stopped by the ceiling, land exactly on it
            soc = config.soc_max
        else:
            soc = min(state.soc + p_charge * config.eta_charge * dt_hours / config.capacity_kwh, config.soc_max)
        return BatteryState(soc), -p_charge

    if p_command_kw > 0:
        limit = max_discharge_power(state, config, dt_hours)
        p_discharge = min(p_command_kw, limit)
        if p_discharge <= 0:
            return BatteryState(state.soc), 0.0
        if p_discharge == limit and limit < config.p_discharge_max_kw:
            soc = config.soc_min
        else:
            soc = max(state.soc - p_discharge * dt_hours / (config.eta_discharge * config.capacity_kwh), config.soc_min)
        return BatteryState(soc), p_discharge

    return BatteryState(state.soc), 0.0


def charge_headroom_energy(state: BatteryState, config: BatteryConfig) -> float:
    """Input energy (kWh) needed to bring the battery up to soc_max."""
    return max(config.soc_max - state.soc, 0.0) * config.capacity_kwh / config.eta_charge
