# Battery and EV state-of-charge models

from src.storage.battery import (
    BatteryState,
    charge_headroom_energy,
    max_charge_power,
    max_discharge_power,
    step_battery,
)
from src.storage.ev import EvState, step_ev

__all__ = [
    "BatteryState",
    "EvState",
    "charge_headroom_energy",
    "max_charge_power",
    "max_discharge_power",
    "step_battery",
    "step_ev",
]
